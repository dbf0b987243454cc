//! Integral binary quadratic forms, even rank-2 lattices, and their isometries.

mod reduction;
mod represent;
mod square;

pub use reduction::{is_ambiguous, reduction_cycle, AmbiguityCertificate, AmbiguityKind, ReductionCycle};
pub use represent::{represents, roots_of_lattice, RootData};
pub use square::{square_involution, square_normal_form, SquareNormalForm};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{is_square, IntMatrix2};
use crate::pell::{solve_pell4, PellRhs, PellSolution};

/// An integral binary quadratic form a*x^2 + b*x*y + c*y^2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> BinaryForm {
        BinaryForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// b^2 - 4ac. This is the negative of 4 det of the associated bilinear
    /// matrix; positive means indefinite.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The doubled Gram matrix (2a, b; b, 2c); integral and even.
    pub fn gram2(&self) -> IntMatrix2 {
        IntMatrix2::new(
            &self.a * 2,
            self.b.clone(),
            self.b.clone(),
            &self.c * 2,
        )
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// The form q(P v): composition with a change of basis.
    pub fn transform(&self, p: &IntMatrix2) -> BinaryForm {
        let (p00, p01, p10, p11) = (p.at(0, 0), p.at(0, 1), p.at(1, 0), p.at(1, 1));
        let a = self.evaluate(p00, p10);
        let c = self.evaluate(p01, p11);
        let b = BigInt::from(2) * &self.a * p00 * p01
            + &self.b * (p00 * p11 + p01 * p10)
            + BigInt::from(2) * &self.c * p10 * p11;
        BinaryForm { a, b, c }
    }

    /// Right adjacency: (a, b, c) -> (c, -b + 2ec, a - eb + c e^2),
    /// the transform by (0, -1; 1, e).
    pub fn adjacent_right(&self, e: &BigInt) -> BinaryForm {
        BinaryForm {
            a: self.c.clone(),
            b: -&self.b + BigInt::from(2) * e * &self.c,
            c: &self.a - e * &self.b + &self.c * e * e,
        }
    }

    /// Translation by (1, e; 0, 1): (a, b + 2ae, a e^2 + be + c).
    pub fn translate(&self, e: &BigInt) -> BinaryForm {
        BinaryForm {
            a: self.a.clone(),
            b: &self.b + BigInt::from(2) * &self.a * e,
            c: &self.a * e * e + &self.b * e + &self.c,
        }
    }

    pub fn negate(&self) -> BinaryForm {
        BinaryForm {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// An even rank-2 lattice written as Q = 2n*q with q primitive.
///
/// The Gram matrix is n * (2a, b; b, 2c). Negative n is allowed; the
/// classification pipeline requires d(q) > 0 (signature (1,1)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenLattice {
    n: BigInt,
    q: BinaryForm,
}

impl EvenLattice {
    pub fn new(n: impl Into<BigInt>, q: BinaryForm) -> Result<EvenLattice> {
        let n = n.into();
        if n.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        if !q.is_primitive() {
            return Err(Error::ImprimitiveForm(q.to_string()));
        }
        Ok(EvenLattice { n, q })
    }

    /// Splits an even symmetric Gram matrix as 2n*q with q primitive,
    /// the sign of n chosen so that q.a > 0 (falling back to q.b, then q.c).
    pub fn from_gram(gram: &IntMatrix2) -> Result<EvenLattice> {
        if !gram.is_symmetric() {
            return Err(Error::NotEvenGram);
        }
        if gram.at(0, 0).is_odd() || gram.at(1, 1).is_odd() {
            return Err(Error::NotEvenGram);
        }
        let a0: BigInt = gram.at(0, 0) / 2;
        let b0 = gram.at(0, 1).clone();
        let c0: BigInt = gram.at(1, 1) / 2;
        if a0.is_zero() && b0.is_zero() && c0.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        let mut n = a0.gcd(&b0).gcd(&c0);
        let lead_negative = if !a0.is_zero() {
            a0.is_negative()
        } else if !b0.is_zero() {
            b0.is_negative()
        } else {
            c0.is_negative()
        };
        if lead_negative {
            n = -n;
        }
        let q = BinaryForm::new(&a0 / &n, &b0 / &n, &c0 / &n);
        debug_assert!(q.is_primitive());
        EvenLattice::new(n, q)
    }

    pub fn scale(&self) -> &BigInt {
        &self.n
    }

    pub fn form(&self) -> &BinaryForm {
        &self.q
    }

    /// Gram matrix n*(2a, b; b, 2c).
    pub fn gram(&self) -> IntMatrix2 {
        IntMatrix2::new(
            BigInt::from(2) * &self.n * &self.q.a,
            &self.n * &self.q.b,
            &self.n * &self.q.b,
            BigInt::from(2) * &self.n * &self.q.c,
        )
    }

    pub fn form_discriminant(&self) -> BigInt {
        self.q.discriminant()
    }

    /// |det Gram| = n^2 * d(q); the order of the discriminant group.
    pub fn disc_order(&self) -> BigInt {
        (&self.n * &self.n * self.q.discriminant()).abs()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.q.discriminant().is_positive()
    }

    /// Human-readable signature, for diagnostics.
    pub fn signature_label(&self) -> String {
        let d = self.q.discriminant();
        if d.is_positive() {
            "(1,1)".into()
        } else if d.is_zero() {
            "degenerate".into()
        } else if (&self.n * &self.q.a).is_positive() || (&self.n * &self.q.c).is_positive() {
            "(2,0)".into()
        } else {
            "(0,2)".into()
        }
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if !self.is_hyperbolic() {
            return Err(Error::WrongSignature(self.signature_label()));
        }
        Ok(())
    }
}

impl fmt::Display for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2*{}*{}", self.n, self.q)
    }
}

/// An isometry of an even lattice: T with transpose(T) * Gram * T = Gram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    m: IntMatrix2,
    det: i8,
}

impl Isometry {
    /// Validates the defining relation against the lattice's Gram matrix.
    pub fn new(m: IntMatrix2, lattice: &EvenLattice) -> Result<Isometry> {
        // n cancels in the congruence, so check against the primitive part.
        let g = lattice.form().gram2();
        if g.congruence(&m) != g {
            return Err(Error::NotIsometry);
        }
        let det = m.det();
        let det = if det.is_one() { 1 } else { -1 };
        Ok(Isometry { m, det })
    }

    pub fn identity() -> Isometry {
        Isometry {
            m: IntMatrix2::identity(),
            det: 1,
        }
    }

    pub fn matrix(&self) -> &IntMatrix2 {
        &self.m
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            m: self.m.mul(&other.m),
            det: self.det * other.det,
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            m: self.m.inverse_unimodular().expect("isometries are unimodular"),
            det: self.det,
        }
    }

    pub fn pow(&self, k: u64) -> Isometry {
        Isometry {
            m: self.m.pow(k),
            det: if self.det == -1 && k % 2 == 1 { -1 } else { 1 },
        }
    }

    pub fn negate(&self) -> Isometry {
        Isometry {
            m: -self.m.clone(),
            det: self.det,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// The distinguished automorph built from the minimal positive solution
/// (U, V) of x^2 - d*y^2 = 4:
///
/// ```text
///   ( (U - bV)/2   -cV      )
///   (  aV           (U+bV)/2 )
/// ```
///
/// It generates the special isometries together with -id, has determinant +1,
/// and preserves each component of the light cone.
pub fn automorph_generator(lattice: &EvenLattice) -> Result<Isometry> {
    let q = lattice.form();
    let d = q.discriminant();
    if is_square(&d) {
        return Err(Error::SquareDiscriminant(d));
    }
    if q.a.is_zero() {
        // Unreachable for non-square d; kept as a guard.
        return Err(Error::NotNormalForm);
    }
    let sol = match solve_pell4(&d, PellRhs::Four, None)? {
        crate::pell::PellOutcome::Minimal(s) => s,
        _ => unreachable!("non-square positive discriminant"),
    };
    automorph_from_solution(lattice, &sol)
}

/// The automorph built from an arbitrary rhs = +4 solution; powers of the
/// generator correspond to powers of the unit.
pub fn automorph_from_solution(lattice: &EvenLattice, sol: &PellSolution) -> Result<Isometry> {
    let q = lattice.form();
    assert_eq!(sol.d, q.discriminant());
    assert_eq!(sol.rhs, PellRhs::Four);
    let two = BigInt::from(2);
    let t = &sol.u - &q.b * &sol.v;
    let s = &sol.u + &q.b * &sol.v;
    assert!(t.is_even() && s.is_even(), "U and bV must share parity");
    let m = IntMatrix2::new(
        t / &two,
        -&q.c * &sol.v,
        &q.a * &sol.v,
        s / &two,
    );
    let iso = Isometry::new(m, lattice)?;
    debug_assert_eq!(iso.det(), 1);
    Ok(iso)
}

/// The determinant -1 involution of an ambiguous form, conjugated back from
/// its normal form: (1, w; 0, -1) with w = 0 (diagonal) or w = 1 (non-diagonal).
///
/// Exactly one of the two signs of the conjugated matrix preserves the
/// light-cone component; that representative is returned.
pub fn involution_generator(lattice: &EvenLattice, cert: &AmbiguityCertificate) -> Result<Isometry> {
    let w = match cert.kind {
        AmbiguityKind::Diagonal => BigInt::zero(),
        AmbiguityKind::NonDiagonal => BigInt::one(),
    };
    let a_normal = IntMatrix2::new(BigInt::one(), w, BigInt::zero(), BigInt::from(-1));
    let p = &cert.transform;
    let m = p.mul(&a_normal).mul(&p.inverse_unimodular()?);
    let mut iso = Isometry::new(m, lattice)?;
    if !is_orthochronous(&iso, lattice)? {
        iso = iso.negate();
    }
    debug_assert_eq!(iso.det(), -1);
    debug_assert!(iso.compose(&iso).is_identity());
    Ok(iso)
}

/// A reference vector of positive norm, all-integer, used to pin down the
/// light-cone component C.
pub(crate) fn positive_norm_vector(lattice: &EvenLattice) -> (BigInt, BigInt) {
    let q = lattice.form();
    let n = lattice.scale();
    if !q.a.is_zero() {
        if (n * &q.a).is_positive() {
            (BigInt::one(), BigInt::zero())
        } else {
            // q(-b, 2a) = -a*d has the opposite sign of a.
            (-q.b.clone(), BigInt::from(2) * &q.a)
        }
    } else {
        // q = bxy + cy^2 with b != 0: q(x, 1) = bx + c takes either sign.
        let sign = if (n * &q.b).is_positive() { 1 } else { -1 };
        (BigInt::from(sign) * (q.c.abs() + 1u8), BigInt::one())
    }
}

/// True iff T maps the chosen light-cone component to itself. For signature
/// (1,1) this is equivalent to Q(T x0, x0) > 0 for any fixed x0 of positive
/// norm, so the test is exact integer arithmetic.
pub fn is_orthochronous(t: &Isometry, lattice: &EvenLattice) -> Result<bool> {
    lattice.require_hyperbolic()?;
    let x0 = positive_norm_vector(lattice);
    let g = lattice.gram();
    let gx0 = g.apply(&x0);
    debug_assert!((&x0.0 * &gx0.0 + &x0.1 * &gx0.1).is_positive());
    let tx0 = t.matrix().apply(&x0);
    let pairing = &tx0.0 * &gx0.0 + &tx0.1 * &gx0.1;
    assert!(!pairing.is_zero(), "positive-norm vectors cannot pair to zero");
    Ok(pairing.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, b: i64, c: i64) -> BinaryForm {
        BinaryForm::new(a, b, c)
    }

    fn lat(n: i64, a: i64, b: i64, c: i64) -> EvenLattice {
        EvenLattice::new(n, form(a, b, c)).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        // x^2 + delta*x*y + y^2 has discriminant delta^2 - 4.
        for delta in [1i64, 3, 4, 7] {
            assert_eq!(form(1, delta, 1).discriminant(), BigInt::from(delta * delta - 4));
        }
        assert_eq!(form(1, 0, 0).discriminant(), BigInt::zero());
        assert_eq!(form(2, 4, 2).discriminant(), BigInt::zero());
    }

    #[test]
    fn content_split_examples() {
        let l = EvenLattice::from_gram(&IntMatrix2::new(2, 4, 4, 2)).unwrap();
        assert_eq!(l.scale(), &BigInt::one());
        assert_eq!(l.form(), &form(1, 4, 1));

        let l = EvenLattice::from_gram(&IntMatrix2::new(4, 0, 0, -12)).unwrap();
        assert_eq!(l.scale(), &BigInt::from(2));
        assert_eq!(l.form(), &form(1, 0, -3));

        let l = EvenLattice::from_gram(&IntMatrix2::new(0, 1, 1, 0)).unwrap();
        assert_eq!(l.scale(), &BigInt::one());
        assert_eq!(l.form(), &form(0, 1, 0));

        // Reassembling the Gram matrix must reproduce the input.
        for g in [
            IntMatrix2::new(2, 4, 4, 2),
            IntMatrix2::new(4, 0, 0, -12),
            IntMatrix2::new(0, -3, -3, -6),
            IntMatrix2::new(-4, 2, 2, -8),
        ] {
            let l = EvenLattice::from_gram(&g).unwrap();
            assert_eq!(l.gram(), g);
        }
    }

    #[test]
    fn content_split_rejects_bad_input() {
        assert!(matches!(
            EvenLattice::from_gram(&IntMatrix2::zero()),
            Err(Error::DegenerateLattice)
        ));
        assert!(matches!(
            EvenLattice::from_gram(&IntMatrix2::new(1, 0, 0, 2)),
            Err(Error::NotEvenGram)
        ));
        assert!(matches!(
            EvenLattice::from_gram(&IntMatrix2::new(2, 1, 0, 2)),
            Err(Error::NotEvenGram)
        ));
    }

    #[test]
    fn adjacency_closed_form_matches_transform() {
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 21) as i64 - 10
        };
        for _ in 0..200 {
            let q = form(next(), next(), next());
            let e = BigInt::from(next());
            let p_e = IntMatrix2::new(0, -1, 1, e.clone());
            assert_eq!(q.adjacent_right(&e), q.transform(&p_e));
        }
        // Monic example: x^2 + bxy + cy^2 is adjacent to cx^2 - bxy + y^2.
        let q = form(1, 5, 7);
        assert_eq!(q.adjacent_right(&BigInt::zero()), form(7, -5, 1));
        // Diagonal swap.
        assert_eq!(form(3, 0, -5).adjacent_right(&BigInt::zero()), form(-5, 0, 3));
    }

    #[test]
    fn double_adjacency_diagonalizes_even_middle() {
        // (1, 2, 5) -> two steps -> x^2 + (c - e^2) y^2 with e = 1.
        let q = form(1, 2, 5);
        let step1 = q.adjacent_right(&BigInt::zero());
        assert_eq!(step1, form(5, -2, 1));
        let step2 = step1.adjacent_right(&BigInt::from(-1));
        assert_eq!(step2, form(1, 0, 4));
    }

    #[test]
    fn automorph_generator_examples() {
        // q = x^2 + delta*xy + y^2 with (U,V) = (delta, 1) gives (0, -1; 1, delta).
        for delta in [4i64, 5, 7] {
            let l = lat(1, 1, delta, 1);
            let u = automorph_generator(&l).unwrap();
            assert_eq!(u.matrix(), &IntMatrix2::new(0, -1, 1, delta));
        }
        // q = x^2 - 3y^2, (U,V) = (4,1): formula yields (2, 3; 1, 2); the
        // matrix printed elsewhere with swapped entries does not preserve q.
        let l = lat(1, 1, 0, -3);
        let u = automorph_generator(&l).unwrap();
        assert_eq!(u.matrix(), &IntMatrix2::new(2, 3, 1, 2));
        // q = x^2 + xy - y^2, d = 5, (U,V) = (3,1): (1, 1; 1, 2).
        let l = lat(1, 1, 1, -1);
        let u = automorph_generator(&l).unwrap();
        assert_eq!(u.matrix(), &IntMatrix2::new(1, 1, 1, 2));
    }

    #[test]
    fn automorph_rejects_square_discriminant() {
        let l = lat(1, 0, 1, 0);
        assert!(matches!(
            automorph_generator(&l),
            Err(Error::SquareDiscriminant(_))
        ));
    }

    #[test]
    fn isometry_constructor_enforces_gram() {
        let l = lat(1, 1, 0, -2);
        assert!(Isometry::new(IntMatrix2::new(1, 1, 0, 1), &l).is_err());
        let u = automorph_generator(&l).unwrap();
        let m = u.matrix().clone();
        assert!(Isometry::new(m, &l).is_ok());
    }

    #[test]
    fn orthochronous_basics() {
        for l in [lat(1, 1, 0, -2), lat(-1, 1, 0, -2), lat(2, 1, 4, 1), lat(1, 0, 1, 0)] {
            let id = Isometry::identity();
            assert!(is_orthochronous(&id, &l).unwrap());
            assert!(!is_orthochronous(&id.negate(), &l).unwrap());
            if !is_square(&l.form_discriminant()) {
                let u = automorph_generator(&l).unwrap();
                assert!(is_orthochronous(&u, &l).unwrap());
                assert!(is_orthochronous(&u.inverse(), &l).unwrap());
                assert!(!is_orthochronous(&u.negate(), &l).unwrap());
            }
        }
    }

    #[test]
    fn orthochronous_rejects_definite() {
        let l = lat(1, 1, 0, 1);
        assert!(is_orthochronous(&Isometry::identity(), &l).is_err());
    }
}
