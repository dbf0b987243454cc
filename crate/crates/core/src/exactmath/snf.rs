use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactmath::IntMatrix2;

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and
/// `D = diag(d1, d2)`, `d1 | d2`, both nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix2,
    pub d: IntMatrix2,
    pub v: IntMatrix2,
}

impl SnfDecomposition {
    pub fn divisors(&self) -> (BigInt, BigInt) {
        (self.d.at(0, 0).clone(), self.d.at(1, 1).clone())
    }
}

struct Work {
    u: IntMatrix2,
    d: IntMatrix2,
    v: IntMatrix2,
}

impl Work {
    fn swap_rows(&mut self) {
        let e = IntMatrix2::new(0, 1, 1, 0);
        self.d = e.mul(&self.d);
        self.u = e.mul(&self.u);
    }

    fn swap_cols(&mut self) {
        let e = IntMatrix2::new(0, 1, 1, 0);
        self.d = self.d.mul(&e);
        self.v = self.v.mul(&e);
    }

    /// row1 -= q * row0
    fn sub_row(&mut self, q: &BigInt) {
        let e = IntMatrix2::new(1, 0, -q.clone(), 1);
        self.d = e.mul(&self.d);
        self.u = e.mul(&self.u);
    }

    /// col1 -= q * col0
    fn sub_col(&mut self, q: &BigInt) {
        let e = IntMatrix2::new(1, -q.clone(), 0, 1);
        self.d = self.d.mul(&e);
        self.v = self.v.mul(&e);
    }

    /// col0 += col1
    fn add_col(&mut self) {
        let e = IntMatrix2::new(1, 0, 1, 1);
        self.d = self.d.mul(&e);
        self.v = self.v.mul(&e);
    }

    fn negate_row(&mut self, i: usize) {
        let e = if i == 0 {
            IntMatrix2::new(-1, 0, 0, 1)
        } else {
            IntMatrix2::new(1, 0, 0, -1)
        };
        self.d = e.mul(&self.d);
        self.u = e.mul(&self.u);
    }

    /// Move a nonzero entry of minimal absolute value to position (0,0).
    fn pivot(&mut self) {
        let mut best: Option<(usize, BigInt)> = None;
        for idx in 0..4 {
            let val = self.d.entries()[idx].abs();
            if val.is_zero() {
                continue;
            }
            if best.as_ref().map_or(true, |(_, b)| val < *b) {
                best = Some((idx, val));
            }
        }
        if let Some((idx, _)) = best {
            if idx >= 2 {
                self.swap_rows();
            }
            if idx % 2 == 1 {
                self.swap_cols();
            }
        }
    }
}

/// Smith normal form of a 2x2 integer matrix. The zero matrix yields `D = 0`.
pub fn snf(m: &IntMatrix2) -> SnfDecomposition {
    let mut w = Work {
        u: IntMatrix2::identity(),
        d: m.clone(),
        v: IntMatrix2::identity(),
    };

    loop {
        if w.d.entries().iter().all(|x| x.is_zero()) {
            break;
        }
        w.pivot();
        let pivot = w.d.at(0, 0).clone();
        debug_assert!(!pivot.is_zero());

        // Clear (1,0) and (0,1); a nonzero remainder becomes the new, smaller
        // pivot on the next pass.
        let below = w.d.at(1, 0).clone();
        if !below.is_zero() {
            let q = &below / &pivot;
            w.sub_row(&q);
            if !w.d.at(1, 0).is_zero() {
                continue;
            }
        }
        let right = w.d.at(0, 1).clone();
        if !right.is_zero() {
            let q = &right / &pivot;
            w.sub_col(&q);
            if !w.d.at(0, 1).is_zero() {
                continue;
            }
        }
        if !w.d.at(1, 0).is_zero() || !w.d.at(0, 1).is_zero() {
            continue;
        }

        // Enforce the divisibility chain d1 | d2.
        let d1 = w.d.at(0, 0).clone();
        let d2 = w.d.at(1, 1).clone();
        if !d2.is_zero() && !(&d2 % &d1).is_zero() {
            w.add_col();
            continue;
        }
        break;
    }

    if w.d.at(0, 0).is_negative() {
        w.negate_row(0);
    }
    if w.d.at(1, 1).is_negative() {
        w.negate_row(1);
    }

    debug_assert_eq!(w.u.mul(m).mul(&w.v), w.d);
    debug_assert!(w.u.det().abs() == BigInt::from(1));
    debug_assert!(w.v.det().abs() == BigInt::from(1));
    SnfDecomposition {
        u: w.u,
        d: w.d,
        v: w.v,
    }
}
