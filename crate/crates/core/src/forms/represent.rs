//! Representations of 0 and -1 by indefinite forms, and the roots (norm -2
//! vectors) of the corresponding even lattice.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{is_square, isqrt, IntMatrix2};
use crate::forms::reduction::{reduction_cycle, AmbiguityKind};
use crate::forms::square::{complete_to_unimodular, isotropic_witness};
use crate::forms::{BinaryForm, EvenLattice};
use crate::pell::{solve_pell4, PellOutcome, PellRhs};

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            small.push(k.clone());
            let other = &n / &k;
            if other != k {
                large.push(other);
            }
        }
        k += 1u8;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All integer solutions of q(x, y) = -1 for square discriminant, by
/// factoring 4a*q into two linear forms; returns the smallest witness.
fn square_represents_minus_one(q: &BinaryForm) -> Option<(BigInt, BigInt)> {
    let d = q.discriminant();
    let delta = isqrt(&d);
    if q.a.is_zero() {
        // q = y(bx + cy): solvable iff b | c + 1, witness ((c+1)/b, -1).
        let num = &q.c + 1u8;
        if (&num % &q.b).is_zero() {
            let w = (num / &q.b, BigInt::from(-1));
            debug_assert_eq!(q.evaluate(&w.0, &w.1), BigInt::from(-1));
            return Some(w);
        }
        return None;
    }
    // 4a*q = (2ax + (b - delta)y)(2ax + (b + delta)y) = -4a.
    let two_a = BigInt::from(2) * &q.a;
    let four_a = BigInt::from(4) * &q.a;
    let two_delta = BigInt::from(2) * &delta;
    let mut best: Option<(BigInt, BigInt)> = None;
    for div in positive_divisors(&four_a) {
        for r in [div.clone(), -div] {
            let s = -&four_a / &r;
            let ynum = &s - &r;
            if !(&ynum % &two_delta).is_zero() {
                continue;
            }
            let y = ynum / &two_delta;
            let xnum = &r - (&q.b - &delta) * &y;
            if !(&xnum % &two_a).is_zero() {
                continue;
            }
            let x = xnum / &two_a;
            debug_assert_eq!(q.evaluate(&x, &y), BigInt::from(-1));
            let key = (y.abs(), x.abs(), y.clone(), x.clone());
            let better = match &best {
                None => true,
                Some((bx, by)) => key < (by.abs(), bx.abs(), by.clone(), bx.clone()),
            };
            if better {
                best = Some((x, y));
            }
        }
    }
    best
}

/// Decides whether a primitive indefinite form represents 0 or -1, with a
/// witness vector.
///
/// For 0 the answer is positive exactly when the discriminant is a perfect
/// square. For -1 and non-square discriminant the reduction cycle decides:
/// a representation exists iff some cycle member has leading coefficient -1
/// (|-1| < sqrt(d)/2 holds for every non-square discriminant, so the classical
/// cycle criterion applies); the witness is read off the cumulative transform.
pub fn represents(q: &BinaryForm, m: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    if !q.is_primitive() {
        return Err(Error::ImprimitiveForm(q.to_string()));
    }
    let d = q.discriminant();
    if !d.is_positive() {
        return Err(Error::NotIndefinite(q.to_string()));
    }
    if m.is_zero() {
        if !is_square(&d) {
            return Ok(None);
        }
        let w = isotropic_witness(q);
        debug_assert!(q.evaluate(&w.0, &w.1).is_zero());
        return Ok(Some(w));
    }
    if *m != BigInt::from(-1) {
        return Err(Error::UnsupportedTarget(m.clone()));
    }
    if is_square(&d) {
        return Ok(square_represents_minus_one(q));
    }
    let cycle = reduction_cycle(q)?;
    for (f, p) in cycle.forms.iter().zip(&cycle.transforms) {
        if f.a == BigInt::from(-1) {
            let w = (p.at(0, 0).clone(), p.at(1, 0).clone());
            debug_assert_eq!(q.evaluate(&w.0, &w.1), BigInt::from(-1));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Basic roots of an even lattice, when roots exist, together with the
/// normal-form data used to build them in the non-square case.
#[derive(Debug, Clone)]
pub struct RootData {
    /// One vector per basic root; all satisfy Q(r, r) = -2. Two entries for
    /// non-square discriminant, one for square.
    pub basic_roots: Vec<(BigInt, BigInt)>,
    pub normal: Option<RootsNormalData>,
}

/// Proper transform carrying the (sign-adjusted) form to the leading -1
/// normal form used by the root construction.
#[derive(Debug, Clone)]
pub struct RootsNormalData {
    pub kind: AmbiguityKind,
    pub target: BinaryForm,
    pub transform: IntMatrix2,
}

/// Roots (vectors of norm -2) of Q = 2n*q: they exist iff |n| = 1 and q
/// represents -sign(n). For non-square discriminant the two basic roots are
/// transported from (-1, 0) and ((U -? V)/2, V) through the normal form.
pub fn roots_of_lattice(lattice: &EvenLattice) -> Result<Option<RootData>> {
    lattice.require_hyperbolic()?;
    let n = lattice.scale();
    if n.abs() != BigInt::one() {
        return Ok(None);
    }
    let q_eff = if n.is_positive() {
        lattice.form().clone()
    } else {
        lattice.form().negate()
    };
    let witness = match represents(&q_eff, &BigInt::from(-1))? {
        Some(w) => w,
        None => return Ok(None),
    };
    let gram = lattice.gram();
    let norm_of = |r: &(BigInt, BigInt)| {
        let gr = gram.apply(r);
        &r.0 * &gr.0 + &r.1 * &gr.1
    };

    let d = q_eff.discriminant();
    if is_square(&d) {
        assert_eq!(norm_of(&witness), BigInt::from(-2));
        return Ok(Some(RootData {
            basic_roots: vec![witness],
            normal: None,
        }));
    }

    // Normal form with leading coefficient -1, by completing the witness to a
    // basis and translating the middle coefficient.
    let p1 = complete_to_unimodular(&witness);
    let q1 = q_eff.transform(&p1);
    assert_eq!(q1.a, BigInt::from(-1));
    let sol = match solve_pell4(&d, PellRhs::Four, None)? {
        PellOutcome::Minimal(s) => s,
        _ => unreachable!("non-square discriminant"),
    };
    let (kind, e, target, f0) = if (&d % 4u8).is_zero() {
        let e = &q1.b / 2u8;
        let target = BinaryForm::new(BigInt::from(-1), BigInt::zero(), &d / 4u8);
        let f0 = (&sol.u / 2u8, sol.v.clone());
        (AmbiguityKind::Diagonal, e, target, f0)
    } else {
        let e = (&q1.b + 1u8) / 2u8;
        let target = BinaryForm::new(BigInt::from(-1), BigInt::from(-1), (&d - 1u8) / 4u8);
        let f0 = ((&sol.u - &sol.v) / 2u8, sol.v.clone());
        (AmbiguityKind::NonDiagonal, e, target, f0)
    };
    let transform = p1.mul(&IntMatrix2::new(
        BigInt::one(),
        e,
        BigInt::zero(),
        BigInt::one(),
    ));
    assert_eq!(q_eff.transform(&transform), target);

    let root_e = transform.apply(&(BigInt::from(-1), BigInt::zero()));
    let root_f = transform.apply(&f0);
    assert_eq!(norm_of(&root_e), BigInt::from(-2));
    assert_eq!(norm_of(&root_f), BigInt::from(-2));
    Ok(Some(RootData {
        basic_roots: vec![root_e, root_f],
        normal: Some(RootsNormalData {
            kind,
            target,
            transform,
        }),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use crate::pell::solve_reduced;

    fn form(a: i64, b: i64, c: i64) -> BinaryForm {
        BinaryForm::new(a, b, c)
    }

    fn lat(n: i64, a: i64, b: i64, c: i64) -> EvenLattice {
        EvenLattice::new(n, form(a, b, c)).unwrap()
    }

    #[test]
    fn zero_iff_square_discriminant() {
        assert!(represents(&form(1, 0, -9), &BigInt::zero()).unwrap().is_some());
        assert!(represents(&form(1, 0, -2), &BigInt::zero()).unwrap().is_none());
        let w = represents(&form(1, 0, -9), &BigInt::zero()).unwrap().unwrap();
        assert_eq!(w, (BigInt::from(3), BigInt::from(1)));
    }

    #[test]
    fn monic_family_minus_one() {
        // x^2 + delta*xy + y^2 represents -1 only for delta = 3.
        for delta in [4i64, 5, 6, 7, 8] {
            assert!(represents(&form(1, delta, 1), &BigInt::from(-1)).unwrap().is_none());
        }
        let w = represents(&form(1, 3, 1), &BigInt::from(-1)).unwrap().unwrap();
        assert_eq!(form(1, 3, 1).evaluate(&w.0, &w.1), BigInt::from(-1));
    }

    #[test]
    fn monic_agrees_with_negative_pell_and_witness_formula() {
        for b in -5i64..=5 {
            for c in -8i64..=8 {
                let q = form(1, b, c);
                let d = q.discriminant();
                if !d.is_positive() || is_square(&d) {
                    continue;
                }
                let rep = represents(&q, &BigInt::from(-1)).unwrap();
                let pell = solve_pell4(&d, PellRhs::MinusFour, None).unwrap();
                assert_eq!(rep.is_some(), pell.is_solvable(), "q={q}");
                if let PellOutcome::Minimal(s) = pell {
                    // (u - bv)/2, v solves q = -1.
                    let x = (&s.u - BigInt::from(b) * &s.v) / 2u8;
                    assert_eq!(q.evaluate(&x, &s.v), BigInt::from(-1));
                }
            }
        }
    }

    #[test]
    fn unsupported_target_rejected() {
        assert!(matches!(
            represents(&form(1, 0, -2), &BigInt::from(5)),
            Err(Error::UnsupportedTarget(_))
        ));
    }

    #[test]
    fn hyperbolic_plane_roots() {
        let l = lat(1, 0, 1, 0);
        let roots = roots_of_lattice(&l).unwrap().unwrap();
        assert_eq!(roots.basic_roots.len(), 1);
        let r = &roots.basic_roots[0];
        assert_eq!(r.0.abs(), BigInt::one());
        assert_eq!(r.1, -r.0.clone());
    }

    #[test]
    fn root_family_examples() {
        // Gram (2, delta; delta, -2): root at (0, 1).
        for delta in 1i64..=6 {
            let l = lat(1, 1, delta, -1);
            let roots = roots_of_lattice(&l).unwrap();
            assert!(roots.is_some(), "delta={delta}");
        }
        // Gram (2, delta; delta, 2) has no roots for delta >= 4.
        for delta in 4i64..=8 {
            let l = lat(1, 1, delta, 1);
            assert!(roots_of_lattice(&l).unwrap().is_none(), "delta={delta}");
        }
        // |n| >= 2 never has roots.
        assert!(roots_of_lattice(&lat(2, 1, 3, 1)).unwrap().is_none());
    }

    #[test]
    fn negative_scale_uses_negated_form() {
        // n = -1: roots need q(v) = +1.
        let l = lat(-1, -1, 0, 2); // Gram (2, 0; 0, -4), q(v) = 1 at (1,0)
        let roots = roots_of_lattice(&l).unwrap();
        assert!(roots.is_some());
        for r in roots.unwrap().basic_roots {
            let g = l.gram();
            let gr = g.apply(&r);
            assert_eq!(&r.0 * &gr.0 + &r.1 * &gr.1, BigInt::from(-2));
        }
    }

    #[test]
    fn bounded_search_agrees_on_small_forms() {
        // Exhaustive cross-check of represents(q, 0) against brute force.
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    let q = form(a, b, c);
                    let d = q.discriminant();
                    if !d.is_positive() || !q.is_primitive() {
                        continue;
                    }
                    let got = represents(&q, &BigInt::zero()).unwrap();
                    let mut brute = false;
                    'out: for x in -20i64..=20 {
                        for y in -20i64..=20 {
                            if (x, y) == (0, 0) {
                                continue;
                            }
                            if x.gcd(&y) == 1 && q.evaluate(&BigInt::from(x), &BigInt::from(y)).is_zero() {
                                brute = true;
                                break 'out;
                            }
                        }
                    }
                    assert_eq!(got.is_some(), brute, "q={q}");
                }
            }
        }
    }
}
