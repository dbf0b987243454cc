use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::is_square;

/// Exact sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn of_rational(x: &BigRational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// An exact element `rat + irr * sqrt(d)` of the real quadratic field Q(sqrt(d)).
///
/// `d` is a fixed positive non-square integer; mixing elements over different
/// radicands is rejected. Both coefficients are reduced rationals
/// (`BigRational` keeps denominators positive and fractions in lowest terms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadNum {
    rat: BigRational,
    irr: BigRational,
    d: BigInt,
}

impl QuadNum {
    /// Builds `rat + irr*sqrt(d)`, validating that `d` is a positive non-square.
    pub fn new(rat: BigRational, irr: BigRational, d: BigInt) -> Result<QuadNum> {
        if !d.is_positive() || is_square(&d) {
            return Err(Error::BadRadicand(d));
        }
        Ok(QuadNum { rat, irr, d })
    }

    /// `(p + q*sqrt(d)) / 2` from integers, the shape of Pell units.
    pub fn half(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<QuadNum> {
        let two = BigInt::from(2);
        Ok(QuadNum::new(
            BigRational::new(p.into(), two.clone()),
            BigRational::new(q.into(), two),
            d.into(),
        )?)
    }

    pub fn from_ints(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<QuadNum> {
        Ok(QuadNum::new(
            BigRational::from_integer(p.into()),
            BigRational::from_integer(q.into()),
            d.into(),
        )?)
    }

    pub fn one_over(d: &BigInt) -> Result<QuadNum> {
        QuadNum::new(BigRational::one(), BigRational::zero(), d.clone())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.irr.is_zero()
    }

    fn check_same_d(&self, other: &QuadNum) -> Result<()> {
        if self.d != other.d {
            return Err(Error::MixedRadicand(self.d.clone(), other.d.clone()));
        }
        Ok(())
    }

    /// Galois conjugate `rat - irr*sqrt(d)`.
    pub fn conjugate(&self) -> QuadNum {
        QuadNum {
            rat: self.rat.clone(),
            irr: -self.irr.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `rat^2 - d*irr^2`, a rational number.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(self.d.clone()) * &self.irr * &self.irr
    }

    pub fn checked_add(&self, other: &QuadNum) -> Result<QuadNum> {
        self.check_same_d(other)?;
        Ok(QuadNum {
            rat: &self.rat + &other.rat,
            irr: &self.irr + &other.irr,
            d: self.d.clone(),
        })
    }

    pub fn checked_sub(&self, other: &QuadNum) -> Result<QuadNum> {
        self.check_same_d(other)?;
        Ok(QuadNum {
            rat: &self.rat - &other.rat,
            irr: &self.irr - &other.irr,
            d: self.d.clone(),
        })
    }

    /// Exact product in Q(sqrt(d)); rejects mismatched radicands.
    pub fn checked_mul(&self, other: &QuadNum) -> Result<QuadNum> {
        self.check_same_d(other)?;
        let d = BigRational::from_integer(self.d.clone());
        Ok(QuadNum {
            rat: &self.rat * &other.rat + &d * &self.irr * &other.irr,
            irr: &self.rat * &other.irr + &self.irr * &other.rat,
            d: self.d.clone(),
        })
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<QuadNum> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadNum {
            rat: &self.rat / &n,
            irr: -&self.irr / &n,
            d: self.d.clone(),
        })
    }

    pub fn pow(&self, k: u64) -> QuadNum {
        let mut acc = QuadNum {
            rat: BigRational::one(),
            irr: BigRational::zero(),
            d: self.d.clone(),
        };
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same radicand");
            }
            base = base.checked_mul(&base).expect("same radicand");
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> QuadNum {
        QuadNum {
            rat: &self.rat * c,
            irr: &self.irr * c,
            d: self.d.clone(),
        }
    }

    /// Exact sign of the real number, decided without floating point.
    ///
    /// When the two parts have opposite signs the comparison reduces to
    /// `rat^2` versus `d * irr^2`.
    pub fn sign(&self) -> Sign {
        let sr = Sign::of_rational(&self.rat);
        let si = Sign::of_rational(&self.irr);
        match (sr, si) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (a, b) if a == b => a,
            _ => {
                // rat and irr*sqrt(d) pull in opposite directions: the larger
                // magnitude wins, and squares compare exactly.
                let rat2 = &self.rat * &self.rat;
                let irr2d = &self.irr * &self.irr * BigRational::from_integer(self.d.clone());
                if rat2 > irr2d {
                    sr
                } else {
                    si
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }
}

impl Add for QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: QuadNum) -> QuadNum {
        self.checked_add(&rhs).expect("mixed radicands")
    }
}

impl Sub for QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: QuadNum) -> QuadNum {
        self.checked_sub(&rhs).expect("mixed radicands")
    }
}

impl Mul for QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: QuadNum) -> QuadNum {
        self.checked_mul(&rhs).expect("mixed radicands")
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            rat: -self.rat,
            irr: -self.irr,
            d: self.d,
        }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.rat, self.irr, self.d)
    }
}
