//! Minimal positive solutions of the Pell equations x^2 - d*y^2 in {1, -1, 4, -4}.
//!
//! The full equations (rhs = +-4) are solved through the fundamental unit of
//! the quadratic order of discriminant d, computed by the continued-fraction
//! expansion of (sigma + sqrt(d))/2 with sigma = d mod 2, detecting the period
//! by state repetition. The reduced equations (rhs = +-1) use the classical
//! expansion of sqrt(d). Solutions are exact `BigInt` pairs and every returned
//! pair is re-checked against the defining equation on construction.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{is_square, isqrt, IntMatrix2, QuadNum};

/// Right-hand side of a Pell equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PellRhs {
    One,
    MinusOne,
    Four,
    MinusFour,
}

impl PellRhs {
    pub fn value(self) -> i64 {
        match self {
            PellRhs::One => 1,
            PellRhs::MinusOne => -1,
            PellRhs::Four => 4,
            PellRhs::MinusFour => -4,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, PellRhs::MinusOne | PellRhs::MinusFour)
    }
}

/// A positive solution (u, v) of x^2 - d*y^2 = rhs, with u, v > 0.
///
/// The trivial solutions (1,0) and (2,0) are deliberately not representable;
/// see [`PellOutcome::TrivialOnly`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub u: BigInt,
    pub v: BigInt,
    pub d: BigInt,
    pub rhs: PellRhs,
}

impl PellSolution {
    pub fn new(u: BigInt, v: BigInt, d: BigInt, rhs: PellRhs) -> PellSolution {
        assert!(u.is_positive() && v.is_positive(), "Pell solution must be positive");
        assert_eq!(
            &u * &u - &d * &v * &v,
            BigInt::from(rhs.value()),
            "({u},{v}) does not solve x^2-{d}y^2={}",
            rhs.value()
        );
        PellSolution { u, v, d, rhs }
    }

    /// The element (u + v*sqrt(d))/2 of Q(sqrt(d)).
    pub fn unit(&self) -> QuadNum {
        QuadNum::half(self.u.clone(), self.v.clone(), self.d.clone()).expect("valid radicand")
    }
}

/// Result of a Pell solve: a minimal positive solution, only the trivial
/// solutions (square d, positive rhs), or no solution at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PellOutcome {
    Minimal(PellSolution),
    TrivialOnly,
    Unsolvable,
}

impl PellOutcome {
    pub fn minimal(&self) -> Option<&PellSolution> {
        match self {
            PellOutcome::Minimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        !matches!(self, PellOutcome::Unsolvable)
    }
}

fn check_d(d: &BigInt) -> Result<()> {
    if d < &BigInt::from(2) {
        return Err(Error::NonPositiveD(d.clone()));
    }
    Ok(())
}

fn guard_bits(d: &BigInt, bits: u64, limit: Option<u64>) -> Result<()> {
    if let Some(max) = limit {
        if bits > max {
            return Err(Error::PellBitsExceeded {
                d: d.clone(),
                bits,
                limit: max,
            });
        }
    }
    Ok(())
}

/// Minimal positive solution of the reduced equation x^2 - d*y^2 = +-1,
/// by the continued-fraction expansion of sqrt(d).
pub fn solve_reduced(d: &BigInt, rhs: PellRhs, max_bits: Option<u64>) -> Result<PellOutcome> {
    assert!(matches!(rhs, PellRhs::One | PellRhs::MinusOne));
    check_d(d)?;
    if is_square(d) {
        return Ok(match rhs {
            PellRhs::One => PellOutcome::TrivialOnly,
            _ => PellOutcome::Unsolvable,
        });
    }

    let s = isqrt(d);
    // sqrt(d) = [a0; a1, a2, ...] with the standard m/q recurrences.
    let mut m = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = s.clone();
    // Convergents h/k of the expansion.
    let (mut h_prev, mut h) = (BigInt::one(), a.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut period = 0u64;
    loop {
        m = &a * &q - &m;
        q = (d - &m * &m) / &q;
        a = (&s + &m) / &q;
        period += 1;
        if q.is_one() {
            break;
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        guard_bits(d, h.bits(), max_bits)?;
    }

    // h^2 - d*k^2 = (-1)^period.
    debug_assert_eq!(&h * &h - d * &k * &k, BigInt::from(if period % 2 == 0 { 1 } else { -1 }));
    let odd = period % 2 == 1;
    match (rhs, odd) {
        (PellRhs::One, false) => Ok(PellOutcome::Minimal(PellSolution::new(h, k, d.clone(), rhs))),
        (PellRhs::One, true) => {
            // Square the norm -1 unit.
            let u = &h * &h + d * &k * &k;
            let v = BigInt::from(2) * &h * &k;
            guard_bits(d, u.bits(), max_bits)?;
            Ok(PellOutcome::Minimal(PellSolution::new(u, v, d.clone(), rhs)))
        }
        (PellRhs::MinusOne, true) => Ok(PellOutcome::Minimal(PellSolution::new(h, k, d.clone(), rhs))),
        (PellRhs::MinusOne, false) => Ok(PellOutcome::Unsolvable),
        _ => unreachable!(),
    }
}

/// Fundamental unit (u + v*sqrt(d))/2 of the quadratic order of discriminant d
/// (non-square d >= 2), returned as (u, v, norm) with norm in {+1, -1} and
/// u^2 - d*v^2 = 4*norm.
///
/// Expands (sigma + sqrt(d))/2, sigma = d mod 2, and accumulates the partial
/// quotients over the first repeated state.
pub fn fundamental_unit(d: &BigInt, max_bits: Option<u64>) -> Result<(BigInt, BigInt, i8)> {
    check_d(d)?;
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d.clone()));
    }
    let s = isqrt(d);
    let sigma = d.mod_floor(&BigInt::from(2));
    let mut p = sigma;
    let mut q = BigInt::from(2);

    // Step count is bounded by the period; every extra step multiplies the
    // eventual unit by at least the golden ratio, so a step cap implies the
    // bit cap.
    let max_steps = max_bits.map(|b| 2 * b + 64);

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    let (cycle_start, cycle_state) = loop {
        if let Some(&j) = seen.get(&(p.clone(), q.clone())) {
            break (j, (p.clone(), q.clone()));
        }
        if let Some(max) = max_steps {
            if quotients.len() as u64 > max {
                return Err(Error::PellBitsExceeded {
                    d: d.clone(),
                    bits: quotients.len() as u64 / 2,
                    limit: max_bits.unwrap(),
                });
            }
        }
        seen.insert((p.clone(), q.clone()), quotients.len());
        let a = if q.is_positive() {
            (&p + &s).div_floor(&q)
        } else {
            (&p + &s + 1u8).div_floor(&q)
        };
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        debug_assert_eq!(&q_next * &q, d - &p_next * &p_next);
        quotients.push(a);
        p = p_next;
        q = q_next;
    };

    // One full cycle of partial quotients, as a Moebius product.
    let mut n = IntMatrix2::identity();
    for a in &quotients[cycle_start..] {
        n = n.mul(&IntMatrix2::new(a.clone(), BigInt::one(), BigInt::one(), BigInt::zero()));
        guard_bits(d, n.max_bits(), max_bits)?;
    }
    let cycle_len = quotients.len() - cycle_start;
    let (pj, qj) = cycle_state;

    // The cycle fixes omega_j = (pj + sqrt(d))/qj, so
    // t = C*omega_j + D is a unit of the order; write t = (u + v*sqrt(d))/2.
    let c = n.at(1, 0);
    let dd = n.at(1, 1);
    let u_num = BigInt::from(2) * (c * &pj + dd * &qj);
    let v_num = BigInt::from(2) * c;
    let (u, ur) = u_num.div_rem(&qj);
    let (v, vr) = v_num.div_rem(&qj);
    assert!(ur.is_zero() && vr.is_zero(), "unit not in the order for d={d}");

    let norm = if cycle_len % 2 == 0 { 1i8 } else { -1i8 };
    assert_eq!(
        &u * &u - d * &v * &v,
        BigInt::from(4 * norm as i64),
        "cycle product is not a unit for d={d}"
    );
    assert!(u.is_positive() && v.is_positive());
    Ok((u, v, norm))
}

/// Minimal positive solution of x^2 - d*y^2 = +-4 via the fundamental unit;
/// the sign of its norm decides solvability of the negative equation.
pub fn solve_pell4(d: &BigInt, rhs: PellRhs, max_bits: Option<u64>) -> Result<PellOutcome> {
    assert!(matches!(rhs, PellRhs::Four | PellRhs::MinusFour));
    check_d(d)?;
    if is_square(d) {
        return Ok(match rhs {
            PellRhs::Four => PellOutcome::TrivialOnly,
            _ => PellOutcome::Unsolvable,
        });
    }
    let (u, v, norm) = fundamental_unit(d, max_bits)?;
    match (rhs, norm) {
        (PellRhs::Four, 1) => Ok(PellOutcome::Minimal(PellSolution::new(u, v, d.clone(), rhs))),
        (PellRhs::Four, _) => {
            // Norm -1 unit: its square is the minimal norm +1 solution.
            let u2: BigInt = (&u * &u + d * &v * &v) / 2;
            let v2 = &u * &v;
            guard_bits(d, u2.bits(), max_bits)?;
            Ok(PellOutcome::Minimal(PellSolution::new(u2, v2, d.clone(), rhs)))
        }
        (PellRhs::MinusFour, -1) => Ok(PellOutcome::Minimal(PellSolution::new(u, v, d.clone(), rhs))),
        (PellRhs::MinusFour, _) => Ok(PellOutcome::Unsolvable),
        _ => unreachable!(),
    }
}

/// Single entry point covering all four right-hand sides.
pub fn solve(d: &BigInt, rhs: PellRhs, max_bits: Option<u64>) -> Result<PellOutcome> {
    match rhs {
        PellRhs::One | PellRhs::MinusOne => solve_reduced(d, rhs, max_bits),
        PellRhs::Four | PellRhs::MinusFour => solve_pell4(d, rhs, max_bits),
    }
}

/// k-th power of a rhs = +-4 solution: (u_k + v_k*sqrt(d))/2 = unit^k.
/// For a norm -1 base the rhs alternates with the parity of k.
pub fn pell_power(sol: &PellSolution, k: u64) -> Result<PellSolution> {
    if k == 0 {
        return Err(Error::BadExponent);
    }
    assert!(
        matches!(sol.rhs, PellRhs::Four | PellRhs::MinusFour),
        "pell_power expects a full (rhs = +-4) solution"
    );
    let (mut u, mut v) = (BigInt::from(2), BigInt::zero());
    let (mut bu, mut bv) = (sol.u.clone(), sol.v.clone());
    let mut e = k;
    // Half-coordinate multiplication: both products stay integral because
    // u and v*sqrt(d) share parity in the order.
    let half_mul = |u1: &BigInt, v1: &BigInt, u2: &BigInt, v2: &BigInt| {
        let nu = (u1 * u2 + &sol.d * v1 * v2) / 2;
        let nv = (u1 * v2 + v1 * u2) / 2;
        debug_assert_eq!(&nu * 2, u1 * u2 + &sol.d * v1 * v2);
        debug_assert_eq!(&nv * 2, u1 * v2 + v1 * u2);
        (nu, nv)
    };
    while e > 0 {
        if e & 1 == 1 {
            (u, v) = half_mul(&u, &v, &bu, &bv);
        }
        e >>= 1;
        if e > 0 {
            (bu, bv) = half_mul(&bu, &bv, &bu, &bv);
        }
    }
    let rhs = match sol.rhs {
        PellRhs::MinusFour if k % 2 == 1 => PellRhs::MinusFour,
        _ => PellRhs::Four,
    };
    Ok(PellSolution::new(u, v, sol.d.clone(), rhs))
}

/// Writes unit^k = a_k * unit - b_k with a_k, b_k > 0 for k >= 2 (a_1, b_1 = 1, 0),
/// where `base` must be the minimal positive rhs = +4 solution.
pub fn convex_decomposition(base: &PellSolution, k: u64) -> Result<(BigInt, BigInt)> {
    if k == 0 {
        return Err(Error::BadExponent);
    }
    if base.rhs != PellRhs::Four {
        return Err(Error::NonMinimalPellBase);
    }
    match solve_pell4(&base.d, PellRhs::Four, None)? {
        PellOutcome::Minimal(min) if min.u == base.u && min.v == base.v => {}
        _ => return Err(Error::NonMinimalPellBase),
    }
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    for _ in 1..k {
        let next_a = &a * &base.u - &b;
        b = std::mem::replace(&mut a, next_a);
    }
    Ok((a, b))
}

/// The fingerprint (p, eps(p)) for each prime p | d in increasing order, where
/// u = eps(p) mod p for the minimal solution of x^2 - d*y^2 = 1. For p = 2 both
/// signs are congruent; +1 is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonVector {
    pub entries: Vec<(BigInt, i8)>,
}

fn distinct_prime_factors(d: &BigInt) -> Vec<BigInt> {
    let mut n = d.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

pub fn epsilon_vector(d: &BigInt, max_bits: Option<u64>) -> Result<EpsilonVector> {
    check_d(d)?;
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d.clone()));
    }
    let sol = match solve_reduced(d, PellRhs::One, max_bits)? {
        PellOutcome::Minimal(s) => s,
        _ => unreachable!("non-square d always has a +1 solution"),
    };
    let mut entries = Vec::new();
    for p in distinct_prime_factors(d) {
        let eps = if p == BigInt::from(2) {
            1
        } else {
            let r = sol.u.mod_floor(&p);
            if r.is_one() {
                1
            } else if r == &p - 1u8 {
                -1
            } else {
                unreachable!("u^2 = 1 mod p for p | d")
            }
        };
        entries.push((p, eps));
    }
    Ok(EpsilonVector { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn minimal(d: i64, rhs: PellRhs) -> PellSolution {
        solve(&big(d), rhs, None).unwrap().minimal().cloned().unwrap()
    }

    #[test]
    fn reduced_table_values() {
        let s = minimal(13, PellRhs::One);
        assert_eq!((s.u, s.v), (big(649), big(180)));
        let s = minimal(8, PellRhs::One);
        assert_eq!((s.u, s.v), (big(3), big(1)));
        let s = minimal(13, PellRhs::MinusOne);
        assert_eq!((s.u, s.v), (big(18), big(5)));
    }

    #[test]
    fn square_d_has_only_trivial_solutions() {
        assert_eq!(solve(&big(9), PellRhs::One, None).unwrap(), PellOutcome::TrivialOnly);
        assert_eq!(solve(&big(9), PellRhs::MinusOne, None).unwrap(), PellOutcome::Unsolvable);
        assert_eq!(solve(&big(16), PellRhs::Four, None).unwrap(), PellOutcome::TrivialOnly);
        assert_eq!(solve(&big(16), PellRhs::MinusFour, None).unwrap(), PellOutcome::Unsolvable);
    }

    #[test]
    fn rejects_tiny_d() {
        assert!(matches!(solve(&big(0), PellRhs::One, None), Err(Error::NonPositiveD(_))));
        assert!(matches!(solve(&big(-7), PellRhs::Four, None), Err(Error::NonPositiveD(_))));
    }

    #[test]
    fn full_equation_table_values() {
        let s = minimal(5, PellRhs::Four);
        assert_eq!((s.u, s.v), (big(3), big(1)));
        let s = minimal(21, PellRhs::Four);
        assert_eq!((s.u, s.v), (big(5), big(1)));
        let s = minimal(5, PellRhs::MinusFour);
        assert_eq!((s.u, s.v), (big(1), big(1)));
        assert_eq!(solve(&big(3), PellRhs::MinusFour, None).unwrap(), PellOutcome::Unsolvable);
        // The printed table value (66,33) fails the equation; (66,16) is the
        // actual minimal solution.
        let s = minimal(17, PellRhs::Four);
        assert_eq!((s.u, s.v), (big(66), big(16)));
        let s = minimal(20, PellRhs::Four);
        assert_eq!((s.u, s.v), (big(18), big(4)));
    }

    #[test]
    fn power_chain_and_group_law() {
        let base = minimal(5, PellRhs::Four);
        let sq = pell_power(&base, 2).unwrap();
        assert_eq!((sq.u.clone(), sq.v.clone()), (big(7), big(3)));
        let same = pell_power(&base, 1).unwrap();
        assert_eq!(same, base);

        let neg = minimal(5, PellRhs::MinusFour);
        let even = pell_power(&neg, 2).unwrap();
        assert_eq!((even.u.clone(), even.v.clone()), (big(3), big(1)));
        assert_eq!(even.rhs, PellRhs::Four);
        let odd = pell_power(&neg, 3).unwrap();
        assert_eq!(odd.rhs, PellRhs::MinusFour);

        // unit^(j+k) = unit^j * unit^k, checked in Q(sqrt(d)).
        for (j, k) in [(1u64, 2u64), (2, 3), (3, 4)] {
            let lhs = pell_power(&base, j + k).unwrap().unit();
            let rhs = pell_power(&base, j)
                .unwrap()
                .unit()
                .checked_mul(&pell_power(&base, k).unwrap().unit())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn power_rejects_zero_exponent() {
        let base = minimal(5, PellRhs::Four);
        assert!(matches!(pell_power(&base, 0), Err(Error::BadExponent)));
    }

    #[test]
    fn convex_decomposition_small_cases() {
        let eta = minimal(5, PellRhs::Four); // U = 3
        assert_eq!(convex_decomposition(&eta, 1).unwrap(), (big(1), big(0)));
        assert_eq!(convex_decomposition(&eta, 2).unwrap(), (big(3), big(1)));
        // a3 = a2*U - b2 = 8, b3 = a2 = 3
        assert_eq!(convex_decomposition(&eta, 3).unwrap(), (big(8), big(3)));
        // eta^3 = 8*eta - 3 in Q(sqrt(5))
        let lhs = pell_power(&eta, 3).unwrap().unit();
        let rhs = eta
            .unit()
            .scale(&num_rational::BigRational::from_integer(big(8)))
            .checked_sub(&QuadNum::from_ints(3, 0, 5).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn convex_decomposition_rejects_non_minimal_base() {
        let eta = minimal(5, PellRhs::Four);
        let eta2 = pell_power(&eta, 2).unwrap();
        assert!(matches!(
            convex_decomposition(&eta2, 2),
            Err(Error::NonMinimalPellBase)
        ));
        let neg = minimal(5, PellRhs::MinusFour);
        assert!(matches!(
            convex_decomposition(&neg, 2),
            Err(Error::NonMinimalPellBase)
        ));
    }

    #[test]
    fn epsilon_vectors_match_table() {
        let e = epsilon_vector(&big(6), None).unwrap();
        assert_eq!(e.entries, vec![(big(2), 1), (big(3), -1)]);
        let e = epsilon_vector(&big(105), None).unwrap();
        assert_eq!(e.entries, vec![(big(3), -1), (big(5), 1), (big(7), -1)]);
        let e = epsilon_vector(&big(44), None).unwrap();
        assert_eq!(e.entries, vec![(big(2), 1), (big(11), 1)]);
        assert!(matches!(
            epsilon_vector(&big(25), None),
            Err(Error::SquareDiscriminant(_))
        ));
    }

    #[test]
    fn negative_solvability_coherence() {
        // -4 solvable iff the minimal +4 solution is the square of the -4 one.
        for d in 2..200i64 {
            let db = big(d);
            if is_square(&db) {
                continue;
            }
            let pos = minimal(d, PellRhs::Four);
            match solve(&db, PellRhs::MinusFour, None).unwrap() {
                PellOutcome::Minimal(neg) => {
                    let sq = pell_power(&neg, 2).unwrap();
                    assert_eq!((sq.u, sq.v), (pos.u.clone(), pos.v.clone()), "d={d}");
                }
                PellOutcome::Unsolvable => {
                    let unit = fundamental_unit(&db, None).unwrap();
                    assert_eq!(unit.2, 1, "d={d}");
                }
                PellOutcome::TrivialOnly => unreachable!(),
            }
        }
    }

    #[test]
    fn mod4_reduction_property() {
        // d = 0 mod 4: (x, y) solves rhs=4 iff (x/2, y) solves rhs=1 for d/4.
        for d in (4..400i64).step_by(4) {
            let db = big(d);
            if is_square(&db) || is_square(&big(d / 4)) {
                continue;
            }
            let full = minimal(d, PellRhs::Four);
            let red = minimal(d / 4, PellRhs::One);
            assert_eq!(full.u, red.u * 2, "d={d}");
            assert_eq!(full.v, red.v, "d={d}");
        }
    }

    #[test]
    fn bit_guard_trips() {
        // d = 421 has a gigantic fundamental solution.
        let err = solve(&big(421), PellRhs::One, Some(16)).unwrap_err();
        assert!(matches!(err, Error::PellBitsExceeded { .. }));
        let err = solve(&big(421), PellRhs::Four, Some(16)).unwrap_err();
        assert!(matches!(err, Error::PellBitsExceeded { .. }));
    }
}
