//! Exact arbitrary-precision arithmetic: elements of Q(sqrt(d)), 2x2 integer
//! matrices, and Smith normal form. Everything here is a pure function over
//! immutable values.

mod matrix;
mod quad;
mod snf;

pub use matrix::IntMatrix2;
pub use quad::{QuadNum, Sign};
pub use snf::{snf, SnfDecomposition};

use num_bigint::BigInt;
use num_traits::Signed;

/// Floor of the integer square root. Panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative number");
    n.sqrt()
}

/// True if `n` is a perfect square (negative numbers are not).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
