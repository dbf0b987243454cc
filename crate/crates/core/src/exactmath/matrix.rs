use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A 2x2 integer matrix, row major: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    e: [BigInt; 4],
}

impl IntMatrix2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> IntMatrix2 {
        IntMatrix2 {
            e: [a.into(), b.into(), c.into(), d.into()],
        }
    }

    pub fn identity() -> IntMatrix2 {
        IntMatrix2::new(1, 0, 0, 1)
    }

    pub fn zero() -> IntMatrix2 {
        IntMatrix2::new(0, 0, 0, 0)
    }

    pub fn at(&self, row: usize, col: usize) -> &BigInt {
        &self.e[2 * row + col]
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    pub fn det(&self) -> BigInt {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn trace(&self) -> BigInt {
        &self.e[0] + &self.e[3]
    }

    pub fn transpose(&self) -> IntMatrix2 {
        IntMatrix2::new(
            self.e[0].clone(),
            self.e[2].clone(),
            self.e[1].clone(),
            self.e[3].clone(),
        )
    }

    pub fn mul(&self, other: &IntMatrix2) -> IntMatrix2 {
        let a = &self.e;
        let b = &other.e;
        IntMatrix2::new(
            &a[0] * &b[0] + &a[1] * &b[2],
            &a[0] * &b[1] + &a[1] * &b[3],
            &a[2] * &b[0] + &a[3] * &b[2],
            &a[2] * &b[1] + &a[3] * &b[3],
        )
    }

    pub fn apply(&self, v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        (
            &self.e[0] * &v.0 + &self.e[1] * &v.1,
            &self.e[2] * &v.0 + &self.e[3] * &v.1,
        )
    }

    pub fn apply_rational(&self, v: &(BigRational, BigRational)) -> (BigRational, BigRational) {
        (
            BigRational::from_integer(self.e[0].clone()) * &v.0
                + BigRational::from_integer(self.e[1].clone()) * &v.1,
            BigRational::from_integer(self.e[2].clone()) * &v.0
                + BigRational::from_integer(self.e[3].clone()) * &v.1,
        )
    }

    pub fn pow(&self, k: u64) -> IntMatrix2 {
        let mut acc = IntMatrix2::identity();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a matrix with determinant +-1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix2> {
        let det = self.det();
        if !det.is_one() && det != BigInt::from(-1) {
            return Err(Error::NotUnimodular);
        }
        let adj = IntMatrix2::new(
            self.e[3].clone(),
            -self.e[1].clone(),
            -self.e[2].clone(),
            self.e[0].clone(),
        );
        Ok(if det.is_one() { adj } else { -adj })
    }

    /// Congruence transform `transpose(P) * self * P`.
    pub fn congruence(&self, p: &IntMatrix2) -> IntMatrix2 {
        p.transpose().mul(self).mul(p)
    }

    pub fn is_identity(&self) -> bool {
        self.e[0].is_one() && self.e[1].is_zero() && self.e[2].is_zero() && self.e[3].is_one()
    }

    pub fn is_symmetric(&self) -> bool {
        self.e[1] == self.e[2]
    }

    pub fn max_bits(&self) -> u64 {
        self.e.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl Neg for IntMatrix2 {
    type Output = IntMatrix2;
    fn neg(self) -> IntMatrix2 {
        IntMatrix2::new(
            -self.e[0].clone(),
            -self.e[1].clone(),
            -self.e[2].clone(),
            -self.e[3].clone(),
        )
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {}; {} {}]",
            self.e[0], self.e[1], self.e[2], self.e[3]
        )
    }
}
