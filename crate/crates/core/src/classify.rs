//! Classification of the orthochronous group and of the extended group (the
//! pairs (eps, g) with g chamber-preserving and inducing eps * id on the
//! discriminant group) of an even lattice of signature (1,1).
//!
//! For a sufficiently general K3 surface with Picard number 2 the extended
//! group of its Picard lattice is the full automorphism group of the surface.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::discgroup::{
    disc_group, induced_action, involution_search, min_power_pm_id, ActionClass, DiscGroup,
};
use crate::error::Result;
use crate::exactmath::{is_square, IntMatrix2};
use crate::forms::{
    automorph_generator, involution_generator, is_ambiguous, is_orthochronous, roots_of_lattice,
    square_involution, square_normal_form, AmbiguityKind, EvenLattice, Isometry, RootData,
};
use crate::pell::{solve_pell4, PellRhs};

/// Group-theoretic shape of the extended group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Trivial,
    CyclicOrder2,
    InfiniteCyclic,
    InfiniteDihedral,
}

/// Which part of the decision tree produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    SquareDiscriminant,
    RootsNegativePell,
    RootsNoNegativePell,
    NonAmbiguous,
    AmbiguousDihedral,
    AmbiguousCyclic,
}

/// The extended group with explicit generators. Each generator carries the
/// sign eps it induces on the discriminant group.
#[derive(Debug, Clone)]
pub struct GroupClass {
    pub kind: GroupKind,
    /// One generator for the cyclic kinds, two involutions for the dihedral.
    pub generators: Vec<(Isometry, i8)>,
    /// For the infinite kinds, the translation element (u^k, eps_k).
    pub translation: Option<(Isometry, i8)>,
    pub branch: Branch,
    /// +id and -id coincide on the discriminant group (a 2-torsion group);
    /// reported eps values are then the canonical +1.
    pub sign_degenerate: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions {
    /// Abort with `PellBitsExceeded` if the fundamental Pell solution grows
    /// beyond this many bits.
    pub max_pell_bits: Option<u64>,
}

/// Shape of the chamber-preserving orthochronous group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoKind {
    Trivial,
    Order2,
    InfiniteCyclic,
    InfiniteDihedral,
}

/// Generators of the chamber-preserving group, plus the Weyl reflections
/// split off by the roots.
#[derive(Debug, Clone)]
pub struct OrthochronousGroup {
    pub kind: OrthoKind,
    pub generators: Vec<Isometry>,
    pub weyl_reflections: Vec<Isometry>,
}

fn assert_isometry(lattice: &EvenLattice, iso: &Isometry) {
    let g = lattice.form().gram2();
    assert_eq!(g.congruence(iso.matrix()), g, "emitted matrix is not an isometry");
}

fn assert_eps(dg: &DiscGroup, iso: &Isometry, eps: i8) {
    let act = induced_action(iso, dg);
    let expected = if act.sign_degenerate {
        ActionClass::PlusId
    } else if eps == 1 {
        ActionClass::PlusId
    } else {
        ActionClass::MinusId
    };
    assert_eq!(act.classification, expected, "generator eps does not match its action");
}

fn root_fixing(iso: &Isometry, roots: &RootData) -> bool {
    // A chamber-preserving isometry permutes the basic roots.
    let images: Vec<_> = roots
        .basic_roots
        .iter()
        .map(|r| iso.matrix().apply(r))
        .collect();
    images.iter().all(|im| roots.basic_roots.contains(im))
}

/// Reflection x -> x + Q(x, r) r in a root r (norm -2 vector).
fn root_reflection(lattice: &EvenLattice, r: &(BigInt, BigInt)) -> Isometry {
    let g = lattice.gram();
    let gr = g.apply(r);
    let m = IntMatrix2::new(
        BigInt::from(1) + &r.0 * &gr.0,
        &r.0 * &gr.1,
        &r.1 * &gr.0,
        BigInt::from(1) + &r.1 * &gr.1,
    );
    Isometry::new(m, lattice).expect("root reflection is an isometry")
}

/// The square-discriminant regime: the special isometries collapse to +-id,
/// so the whole analysis is an enumeration of at most four isometries.
fn classify_square(lattice: &EvenLattice, dg: &DiscGroup) -> Result<GroupClass> {
    let q = lattice.form();
    let nf = square_normal_form(q)?;
    let involution = square_involution(lattice, &nf)?;
    let roots = roots_of_lattice(lattice)?;
    let degenerate = dg.sign_degenerate();

    // Chamber-preserving candidates among +-a.
    let mut chamber: Option<Isometry> = None;
    if let Some(a) = involution {
        for cand in [a.clone(), a.negate()] {
            let ok = is_orthochronous(&cand, lattice)?
                && roots.as_ref().map_or(true, |r| root_fixing(&cand, r));
            if ok {
                assert!(chamber.is_none(), "both signs of the involution preserve the chamber");
                chamber = Some(cand);
            }
        }
    }

    let mut generators: Vec<(Isometry, i8)> = Vec::new();
    if degenerate {
        // (-1, id) is an extended-group element exactly when -id = +id on disc.
        generators.push((Isometry::identity(), -1));
    }
    if let Some(a) = &chamber {
        match induced_action(a, dg).classification {
            ActionClass::PlusId => generators.push((a.clone(), 1)),
            ActionClass::MinusId => generators.push((a.clone(), -1)),
            ActionClass::Other => {}
        }
    }
    assert!(
        generators.len() <= 1,
        "square-discriminant extended group larger than order 2"
    );

    let kind = if generators.is_empty() {
        GroupKind::Trivial
    } else {
        let (g, _) = &generators[0];
        assert!(g.compose(g).is_identity());
        GroupKind::CyclicOrder2
    };
    Ok(GroupClass {
        kind,
        generators,
        translation: None,
        branch: Branch::SquareDiscriminant,
        sign_degenerate: degenerate,
    })
}

/// The generator -a'u of the chamber-preserving group when roots exist
/// (non-square discriminant), pulled back to the lattice basis.
fn roots_involution(lattice: &EvenLattice, roots: &RootData) -> Result<Isometry> {
    let normal = roots
        .normal
        .as_ref()
        .expect("non-square root data carries its normal form");
    let target_lattice = EvenLattice::new(1, normal.target.clone())?;
    let u0 = automorph_generator(&target_lattice)?;
    let w = match normal.kind {
        AmbiguityKind::Diagonal => BigInt::from(0),
        AmbiguityKind::NonDiagonal => BigInt::from(1),
    };
    let a0 = IntMatrix2::new(BigInt::from(1), w, BigInt::from(0), BigInt::from(-1));
    let g0 = -a0.mul(u0.matrix());
    let p = &normal.transform;
    let m = p.mul(&g0).mul(&p.inverse_unimodular()?);
    let iso = Isometry::new(m, lattice)?;
    assert!(iso.compose(&iso).is_identity());
    assert_eq!(iso.det(), -1);
    assert!(is_orthochronous(&iso, lattice)?);
    assert!(root_fixing(&iso, roots));
    Ok(iso)
}

/// Full classification of the extended group with explicit generators.
///
/// Decision tree: square discriminant first; otherwise roots force a finite
/// verdict through the negative Pell equation; otherwise the group is infinite
/// cyclic on a power of the automorph, extended to the infinite dihedral group
/// when the form is ambiguous and some a u^l acts as +-id.
pub fn classify_extended_group(
    lattice: &EvenLattice,
    opts: &ClassifyOptions,
) -> Result<GroupClass> {
    lattice.require_hyperbolic()?;
    let dg = disc_group(lattice)?;
    let d = lattice.form_discriminant();

    if is_square(&d) {
        return classify_square(lattice, &dg);
    }
    // Pathological fundamental units trip the guard here, before any of the
    // downstream machinery needs them.
    solve_pell4(&d, PellRhs::Four, opts.max_pell_bits)?;

    let degenerate = dg.sign_degenerate();
    if let Some(roots) = roots_of_lattice(lattice)? {
        let g = roots_involution(lattice, &roots)?;
        let neg = solve_pell4(&d, PellRhs::MinusFour, None)?;
        if neg.is_solvable() {
            assert_eq!(
                induced_action(&g, &dg).classification,
                ActionClass::MinusId,
                "-a'u must act as -id when the negative Pell equation is solvable"
            );
            assert_isometry(lattice, &g);
            return Ok(GroupClass {
                kind: GroupKind::CyclicOrder2,
                generators: vec![(g, -1)],
                translation: None,
                branch: Branch::RootsNegativePell,
                sign_degenerate: degenerate,
            });
        }
        return Ok(GroupClass {
            kind: GroupKind::Trivial,
            generators: vec![],
            translation: None,
            branch: Branch::RootsNoNegativePell,
            sign_degenerate: degenerate,
        });
    }

    let u = automorph_generator(lattice)?;
    let (k, eps_k) = min_power_pm_id(&u, &dg);
    let u_k = u.pow(k);
    assert_isometry(lattice, &u_k);
    assert!(is_orthochronous(&u_k, lattice)?);
    assert_eps(&dg, &u_k, eps_k);

    let cert = is_ambiguous(lattice.form())?;
    if let Some(cert) = cert {
        let a = involution_generator(lattice, &cert)?;
        assert!(is_orthochronous(&a, lattice)?);
        if let Some((ell, eps1)) = involution_search(&a, &u, &dg, k) {
            let s1 = a.compose(&u.pow(ell));
            let s2 = a.compose(&u.pow(ell + k));
            let eps2 = eps1 * eps_k;
            for (s, eps) in [(&s1, eps1), (&s2, eps2)] {
                assert_isometry(lattice, s);
                assert!(s.compose(s).is_identity());
                assert!(is_orthochronous(s, lattice)?);
                assert_eps(&dg, s, eps);
            }
            // s1 s2 = u^k has infinite order; its trace exceeds 2 in absolute
            // value because the discriminant is not a square.
            let prod = s1.compose(&s2);
            assert!(prod.matrix().trace().abs() > BigInt::from(2));
            return Ok(GroupClass {
                kind: GroupKind::InfiniteDihedral,
                generators: vec![(s1, eps1), (s2, eps2)],
                translation: Some((u_k, eps_k)),
                branch: Branch::AmbiguousDihedral,
                sign_degenerate: degenerate,
            });
        }
        return Ok(GroupClass {
            kind: GroupKind::InfiniteCyclic,
            generators: vec![(u_k.clone(), eps_k)],
            translation: Some((u_k, eps_k)),
            branch: Branch::AmbiguousCyclic,
            sign_degenerate: degenerate,
        });
    }
    Ok(GroupClass {
        kind: GroupKind::InfiniteCyclic,
        generators: vec![(u_k.clone(), eps_k)],
        translation: Some((u_k, eps_k)),
        branch: Branch::NonAmbiguous,
        sign_degenerate: degenerate,
    })
}

/// Generators of the chamber-preserving orthochronous group, together with
/// the Weyl reflections split off by the roots.
pub fn orthochronous_group(lattice: &EvenLattice) -> Result<OrthochronousGroup> {
    lattice.require_hyperbolic()?;
    let d = lattice.form_discriminant();
    let roots = roots_of_lattice(lattice)?;
    let weyl_reflections: Vec<Isometry> = roots
        .as_ref()
        .map(|r| r.basic_roots.iter().map(|v| root_reflection(lattice, v)).collect())
        .unwrap_or_default();

    if is_square(&d) {
        let nf = square_normal_form(lattice.form())?;
        let involution = square_involution(lattice, &nf)?;
        let mut generators = Vec::new();
        if let Some(a) = involution {
            for cand in [a.clone(), a.negate()] {
                if is_orthochronous(&cand, lattice)?
                    && roots.as_ref().map_or(true, |r| root_fixing(&cand, r))
                {
                    generators.push(cand);
                }
            }
        }
        let kind = if generators.is_empty() {
            OrthoKind::Trivial
        } else {
            OrthoKind::Order2
        };
        return Ok(OrthochronousGroup {
            kind,
            generators,
            weyl_reflections,
        });
    }

    if let Some(roots) = roots {
        let g = roots_involution(lattice, &roots)?;
        return Ok(OrthochronousGroup {
            kind: OrthoKind::Order2,
            generators: vec![g],
            weyl_reflections,
        });
    }

    let u = automorph_generator(lattice)?;
    match is_ambiguous(lattice.form())? {
        Some(cert) => {
            let a = involution_generator(lattice, &cert)?;
            Ok(OrthochronousGroup {
                kind: OrthoKind::InfiniteDihedral,
                generators: vec![a, u],
                weyl_reflections,
            })
        }
        None => Ok(OrthochronousGroup {
            kind: OrthoKind::InfiniteCyclic,
            generators: vec![u],
            weyl_reflections,
        }),
    }
}

/// True iff the discriminant group avoids the exceptional list Z/2, (Z/2)^2,
/// (Z/2)^3, Z/3, Z/5, (Z/5)^2, Z/11; the isomorphism class is compared, not
/// just the order (Z/4 has an excluded order but is itself fine).
pub fn aut_general_guarantee(dg: &DiscGroup) -> bool {
    let shape: Vec<u64> = dg
        .snf_type
        .iter()
        .map(|x| u64::try_from(x).unwrap_or(u64::MAX))
        .collect();
    const EXCLUDED: [&[u64]; 7] = [
        &[2],
        &[2, 2],
        &[2, 2, 2],
        &[3],
        &[5],
        &[5, 5],
        &[11],
    ];
    !EXCLUDED.iter().any(|e| shape.as_slice() == *e)
}

/// Finite extended group <=> the lattice has an isotropic vector (square
/// discriminant) or a root.
pub fn finiteness(lattice: &EvenLattice) -> Result<bool> {
    lattice.require_hyperbolic()?;
    if is_square(&lattice.form_discriminant()) {
        return Ok(true);
    }
    Ok(roots_of_lattice(lattice)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::forms::BinaryForm;

    fn lat(n: i64, a: i64, b: i64, c: i64) -> EvenLattice {
        EvenLattice::new(n, BinaryForm::new(a, b, c)).unwrap()
    }

    fn classify(l: &EvenLattice) -> GroupClass {
        classify_extended_group(l, &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn hyperbolic_plane_is_mu2() {
        let h = lat(1, 0, 1, 0);
        let g = classify(&h);
        assert_eq!(g.kind, GroupKind::CyclicOrder2);
        assert_eq!(g.branch, Branch::SquareDiscriminant);
        // The generator acts trivially on the lattice, as -1 on the period.
        assert!(g.generators[0].0.is_identity());
        assert_eq!(g.generators[0].1, -1);
        let o = orthochronous_group(&h).unwrap();
        assert_eq!(o.kind, OrthoKind::Trivial);
        assert_eq!(o.weyl_reflections.len(), 1);
    }

    #[test]
    fn wehler_lattice_is_dihedral() {
        let l = EvenLattice::from_gram(&IntMatrix2::new(2, 4, 4, 2)).unwrap();
        let g = classify(&l);
        assert_eq!(g.kind, GroupKind::InfiniteDihedral);
        assert_eq!(g.generators.len(), 2);
        for (s, eps) in &g.generators {
            assert_eq!(*eps, -1);
            assert!(s.compose(s).is_identity());
        }
        // The two involutions do not commute (their product has infinite order).
        let (s1, s2) = (&g.generators[0].0, &g.generators[1].0);
        assert_ne!(
            s1.compose(s2).matrix(),
            s2.compose(s1).matrix(),
            "distinct dihedral generators cannot commute"
        );
    }

    #[test]
    fn monic_even_family_dihedral_generators() {
        // Gram (2, delta; delta, 2), delta >= 4: dihedral, generated by u^2
        // (eps +1) and a (eps -1).
        for delta in 4i64..=7 {
            let l = lat(1, 1, delta, 1);
            let g = classify(&l);
            assert_eq!(g.kind, GroupKind::InfiniteDihedral, "delta={delta}");
            let (uk, eps_k) = g.translation.as_ref().unwrap();
            assert_eq!(*eps_k, 1, "delta={delta}");
            // Translation is u^2 for this family.
            let u = automorph_generator(&l).unwrap();
            assert_eq!(uk.matrix(), u.pow(2).matrix());
            // s1 = a u^0 = a with eps = -1.
            assert_eq!(g.generators[0].1, -1);
        }
    }

    #[test]
    fn root_family_is_cyclic_order_2() {
        // Gram (2, delta; delta, -2): negative Pell solvable, -a'u generates.
        for delta in 1i64..=8 {
            let l = lat(1, 1, delta, -1);
            let g = classify(&l);
            assert_eq!(g.kind, GroupKind::CyclicOrder2, "delta={delta}");
            assert_eq!(g.branch, Branch::RootsNegativePell);
            assert_eq!(g.generators[0].1, -1);
        }
    }

    #[test]
    fn scaled_diagonal_family_is_infinite_cyclic() {
        // n = 2, q = d x^2 - y^2: no roots possible, diagonal lemma kills the
        // involution, so infinite cyclic.
        for d0 in [2i64, 3, 5, 6, 7] {
            let l = lat(2, d0, 0, -1);
            let g = classify(&l);
            assert_eq!(g.kind, GroupKind::InfiniteCyclic, "d0={d0}");
            assert_eq!(g.branch, Branch::AmbiguousCyclic);
        }
    }

    #[test]
    fn zero_block_family_square_cases() {
        // Gram (0, b; b, 2c).
        let gram = |b: i64, c: i64| IntMatrix2::new(0, b, b, 2 * c);
        let l = EvenLattice::from_gram(&gram(2, 0)).unwrap();
        assert_eq!(classify(&l).kind, GroupKind::CyclicOrder2);
        let l = EvenLattice::from_gram(&gram(3, 2)).unwrap();
        assert_eq!(classify(&l).kind, GroupKind::Trivial);
        let l = EvenLattice::from_gram(&gram(3, 1)).unwrap();
        assert_eq!(classify(&l).kind, GroupKind::CyclicOrder2);
        let l = EvenLattice::from_gram(&gram(3, 0)).unwrap();
        assert_eq!(classify(&l).kind, GroupKind::Trivial);
    }

    #[test]
    fn finiteness_matches_kind() {
        for (l, expect) in [
            (lat(1, 0, 1, 0), true),
            (lat(1, 1, 4, 1), false),
            (lat(1, 1, 3, -1), true),
            (lat(2, 3, 0, -1), false),
        ] {
            assert_eq!(finiteness(&l).unwrap(), expect, "{l}");
            let g = classify(&l);
            let finite_kind = matches!(g.kind, GroupKind::Trivial | GroupKind::CyclicOrder2);
            assert_eq!(finite_kind, expect, "{l}");
        }
    }

    #[test]
    fn aut_general_list() {
        // snf [2,6] (order 12) is fine; Z/5 is excluded; Z/4 is fine even
        // though its order appears in the excluded orders.
        let l = EvenLattice::from_gram(&IntMatrix2::new(2, 4, 4, 2)).unwrap();
        assert!(aut_general_guarantee(&disc_group(&l).unwrap()));
        let l = lat(1, 1, 5, 1); // disc Z/21
        assert!(aut_general_guarantee(&disc_group(&l).unwrap()));
        let l = lat(1, 1, 3, 1); // d = 5: disc Z/5
        assert!(!aut_general_guarantee(&disc_group(&l).unwrap()));
        let l = lat(1, 1, 2, -1); // d = 8? (4+4): disc Z/8... use explicit shapes below
        let dg = disc_group(&l).unwrap();
        if dg.snf_type == vec![BigInt::from(8)] {
            assert!(aut_general_guarantee(&dg));
        }
        let h2 = EvenLattice::from_gram(&IntMatrix2::new(0, 2, 2, 0)).unwrap(); // (Z/2)^2
        assert!(!aut_general_guarantee(&disc_group(&h2).unwrap()));
        let z4 = lat(1, 1, 2, -1);
        let dg = disc_group(&z4).unwrap();
        if dg.snf_type == vec![BigInt::from(4)] {
            assert!(aut_general_guarantee(&dg));
        }
    }

    #[test]
    fn rejects_definite_input() {
        let l = lat(1, 1, 0, 1);
        assert!(matches!(
            classify_extended_group(&l, &ClassifyOptions::default()),
            Err(Error::WrongSignature(_))
        ));
    }

    #[test]
    fn guard_propagates() {
        let l = lat(1, 1, 0, -421);
        let err = classify_extended_group(
            &l,
            &ClassifyOptions {
                max_pell_bits: Some(16),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::PellBitsExceeded { .. }));
    }
}
