//! The square-discriminant regime: such forms represent 0, their special
//! isometry group collapses to +-id, and everything is decided from the
//! normal form (0, B, C) with C reduced mod |B|.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{is_square, isqrt, IntMatrix2};
use crate::forms::{BinaryForm, EvenLattice, Isometry};

/// Completes a primitive column vector to a determinant +1 matrix.
pub(crate) fn complete_to_unimodular(v: &(BigInt, BigInt)) -> IntMatrix2 {
    let g = v.0.extended_gcd(&v.1);
    assert!(g.gcd.is_one(), "vector {:?} is not primitive", v);
    // v.0 * x + v.1 * y = 1  =>  det (v.0, -y; v.1, x) = 1
    IntMatrix2::new(v.0.clone(), -g.y, v.1.clone(), g.x)
}

/// A primitive isotropic vector of a form with square discriminant.
pub(crate) fn isotropic_witness(q: &BinaryForm) -> (BigInt, BigInt) {
    let d = q.discriminant();
    debug_assert!(is_square(&d) && !d.is_negative());
    if q.a.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let delta = isqrt(&d);
    let x = &delta - &q.b;
    let y = BigInt::from(2) * &q.a;
    let g = x.gcd(&y);
    let w = (x / &g, y / &g);
    debug_assert!(q.evaluate(&w.0, &w.1).is_zero());
    w
}

/// Normal form (0, B, C) of a primitive form with discriminant B^2 > 0,
/// 0 <= C < |B|, gcd(B, C) = 1, reached by a proper change of basis.
#[derive(Debug, Clone)]
pub struct SquareNormalForm {
    pub b: BigInt,
    pub c: BigInt,
    pub transform: IntMatrix2,
}

pub fn square_normal_form(q: &BinaryForm) -> Result<SquareNormalForm> {
    let d = q.discriminant();
    if !d.is_positive() {
        return Err(Error::NotIndefinite(q.to_string()));
    }
    if !is_square(&d) {
        return Err(Error::NonSquareDiscriminant(d));
    }
    if !q.is_primitive() {
        return Err(Error::ImprimitiveForm(q.to_string()));
    }
    let w = isotropic_witness(q);
    let p1 = complete_to_unimodular(&w);
    let q1 = q.transform(&p1);
    assert!(q1.a.is_zero());
    let delta = isqrt(&d);
    assert_eq!(q1.b.abs(), delta);
    let c = q1.c.mod_floor(&delta);
    let e = (&c - &q1.c) / &q1.b;
    let t = IntMatrix2::new(BigInt::one(), e, BigInt::zero(), BigInt::one());
    let transform = p1.mul(&t);
    let target = BinaryForm::new(BigInt::zero(), q1.b.clone(), c.clone());
    debug_assert_eq!(q.transform(&transform), target);
    debug_assert!(c.gcd(&delta).is_one());
    Ok(SquareNormalForm {
        b: q1.b,
        c,
        transform,
    })
}

/// The determinant -1 automorph of a square-discriminant form, when one
/// exists. On the normal form (0, B, C) it swaps the two isotropic rays and
/// exists iff C^2 = 1 mod |B|.
pub fn square_involution(lattice: &EvenLattice, nf: &SquareNormalForm) -> Result<Option<Isometry>> {
    let delta = nf.b.abs();
    if !(&nf.c * &nf.c - 1u8).mod_floor(&delta).is_zero() {
        return Ok(None);
    }
    let t01 = (BigInt::one() - &nf.c * &nf.c) / &nf.b;
    let a0 = IntMatrix2::new(-nf.c.clone(), t01, nf.b.clone(), nf.c.clone());
    let m = nf
        .transform
        .mul(&a0)
        .mul(&nf.transform.inverse_unimodular()?);
    let iso = Isometry::new(m, lattice)?;
    debug_assert_eq!(iso.det(), -1);
    debug_assert!(iso.compose(&iso).is_identity());
    Ok(Some(iso))
}
