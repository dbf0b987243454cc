//! Exact arithmetic for indefinite even binary lattices.
//!
//! The crate computes, in exact integer/rational arithmetic, the data attached
//! to a rank-2 even lattice of signature (1,1): minimal Pell solutions and
//! fundamental units, reduction cycles and ambiguity of the underlying binary
//! quadratic form, the discriminant group together with the induced action of
//! isometries on it, and finally the orthochronous and extended isometry
//! groups with explicit matrix generators. For a K3 surface with Picard
//! number 2 whose Picard lattice is "general enough", the extended group is
//! the full automorphism group of the surface.
//!
//! No floating point is used anywhere; every sign test and every group
//! computation is decided over `BigInt`/`BigRational`.

pub mod classify;
pub mod discgroup;
mod error;
pub mod exactmath;
pub mod forms;
pub mod pell;
pub mod report;
pub mod tables;

pub use error::{Error, Result};
