//! Serializable report document for a classified lattice. Big integers are
//! serialized as decimal strings (JSON numbers cannot carry Pell-sized
//! values), matrices row major, rationals as [numerator, denominator].

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::classify::{
    aut_general_guarantee, classify_extended_group, finiteness, orthochronous_group, Branch,
    ClassifyOptions, GroupKind, OrthoKind,
};
use crate::discgroup::disc_group;
use crate::error::Result;
use crate::exactmath::{is_square, IntMatrix2};
use crate::forms::{is_ambiguous, roots_of_lattice, AmbiguityKind, EvenLattice, Isometry};
use crate::pell::{solve, PellOutcome, PellRhs};

pub const SCHEMA_VERSION: &str = "autok3/1";

fn s(x: &BigInt) -> String {
    x.to_string()
}

fn rat(x: &BigRational) -> [String; 2] {
    [x.numer().to_string(), x.denom().to_string()]
}

pub fn matrix_rows(m: &IntMatrix2) -> [[String; 2]; 2] {
    [
        [s(m.at(0, 0)), s(m.at(0, 1))],
        [s(m.at(1, 0)), s(m.at(1, 1))],
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub matrix: [[String; 2]; 2],
    pub epsilon: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PellDoc {
    pub d: String,
    /// Minimal positive solutions keyed by right-hand side; None means only
    /// trivial solutions or unsolvable.
    pub plus_one: Option<[String; 2]>,
    pub minus_one: Option<[String; 2]>,
    pub plus_four: Option<[String; 2]>,
    pub minus_four: Option<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscDoc {
    pub order: String,
    pub snf_type: Vec<String>,
    pub generators: Vec<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmbiguityDoc {
    pub kind: String,
    pub target: [String; 3],
    pub transform: [[String; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootsDoc {
    pub basic_roots: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthoDoc {
    pub kind: String,
    pub generators: Vec<[[String; 2]; 2]>,
    pub weyl_reflections: Vec<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendedDoc {
    pub kind: String,
    pub branch: String,
    pub generators: Vec<GeneratorDoc>,
    pub translation: Option<GeneratorDoc>,
    pub sign_degenerate: bool,
}

/// The complete per-lattice report; `schema` is always `autok3/1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeReport {
    pub schema: String,
    pub gram: [[String; 2]; 2],
    pub n: String,
    pub form: [String; 3],
    pub discriminant: String,
    pub square_discriminant: bool,
    pub ambiguous: Option<AmbiguityDoc>,
    pub roots: Option<RootsDoc>,
    pub pell: Option<PellDoc>,
    pub disc_group: DiscDoc,
    pub orthochronous: OrthoDoc,
    pub extended: ExtendedDoc,
    pub aut_general: bool,
    pub finite: bool,
    /// Generators are expressed in the basis of the input Gram matrix.
    pub basis: String,
}

fn kind_str(k: GroupKind) -> &'static str {
    match k {
        GroupKind::Trivial => "trivial",
        GroupKind::CyclicOrder2 => "cyclic_order_2",
        GroupKind::InfiniteCyclic => "infinite_cyclic",
        GroupKind::InfiniteDihedral => "infinite_dihedral",
    }
}

fn branch_str(b: Branch) -> &'static str {
    match b {
        Branch::SquareDiscriminant => "square_discriminant",
        Branch::RootsNegativePell => "roots_negative_pell",
        Branch::RootsNoNegativePell => "roots_no_negative_pell",
        Branch::NonAmbiguous => "non_ambiguous",
        Branch::AmbiguousDihedral => "ambiguous_dihedral",
        Branch::AmbiguousCyclic => "ambiguous_cyclic",
    }
}

fn ortho_kind_str(k: OrthoKind) -> &'static str {
    match k {
        OrthoKind::Trivial => "trivial",
        OrthoKind::Order2 => "order_2",
        OrthoKind::InfiniteCyclic => "infinite_cyclic",
        OrthoKind::InfiniteDihedral => "infinite_dihedral",
    }
}

fn gen_doc(iso: &Isometry, eps: i8) -> GeneratorDoc {
    GeneratorDoc {
        matrix: matrix_rows(iso.matrix()),
        epsilon: eps,
    }
}

fn pell_entry(d: &BigInt, rhs: PellRhs, max_bits: Option<u64>) -> Result<Option<[String; 2]>> {
    Ok(match solve(d, rhs, max_bits)? {
        PellOutcome::Minimal(sol) => Some([s(&sol.u), s(&sol.v)]),
        _ => None,
    })
}

/// Classifies a lattice and assembles the full report document.
pub fn build_report(lattice: &EvenLattice, opts: &ClassifyOptions) -> Result<LatticeReport> {
    lattice.require_hyperbolic()?;
    let q = lattice.form();
    let d = q.discriminant();
    let square = is_square(&d);
    let extended = classify_extended_group(lattice, opts)?;
    let ortho = orthochronous_group(lattice)?;
    let dg = disc_group(lattice)?;
    let roots = roots_of_lattice(lattice)?;
    let ambiguous = if square {
        None
    } else {
        is_ambiguous(q)?.map(|cert| AmbiguityDoc {
            kind: match cert.kind {
                AmbiguityKind::Diagonal => "diagonal".into(),
                AmbiguityKind::NonDiagonal => "non_diagonal".into(),
            },
            target: [s(&cert.target.a), s(&cert.target.b), s(&cert.target.c)],
            transform: matrix_rows(&cert.transform),
        })
    };
    let pell = if square {
        None
    } else {
        Some(PellDoc {
            d: s(&d),
            plus_one: pell_entry(&d, PellRhs::One, opts.max_pell_bits)?,
            minus_one: pell_entry(&d, PellRhs::MinusOne, opts.max_pell_bits)?,
            plus_four: pell_entry(&d, PellRhs::Four, opts.max_pell_bits)?,
            minus_four: pell_entry(&d, PellRhs::MinusFour, opts.max_pell_bits)?,
        })
    };

    Ok(LatticeReport {
        schema: SCHEMA_VERSION.into(),
        gram: matrix_rows(&lattice.gram()),
        n: s(lattice.scale()),
        form: [s(&q.a), s(&q.b), s(&q.c)],
        discriminant: s(&d),
        square_discriminant: square,
        ambiguous,
        roots: roots.map(|r| RootsDoc {
            basic_roots: r
                .basic_roots
                .iter()
                .map(|(x, y)| [s(x), s(y)])
                .collect(),
        }),
        pell,
        disc_group: DiscDoc {
            order: s(&dg.order),
            snf_type: dg.snf_type.iter().map(s).collect(),
            generators: dg
                .generators
                .iter()
                .map(|(x, y)| [rat(x), rat(y)])
                .collect(),
        },
        orthochronous: OrthoDoc {
            kind: ortho_kind_str(ortho.kind).into(),
            generators: ortho.generators.iter().map(|g| matrix_rows(g.matrix())).collect(),
            weyl_reflections: ortho
                .weyl_reflections
                .iter()
                .map(|g| matrix_rows(g.matrix()))
                .collect(),
        },
        extended: ExtendedDoc {
            kind: kind_str(extended.kind).into(),
            branch: branch_str(extended.branch).into(),
            generators: extended
                .generators
                .iter()
                .map(|(g, eps)| gen_doc(g, *eps))
                .collect(),
            translation: extended.translation.as_ref().map(|(g, eps)| gen_doc(g, *eps)),
            sign_degenerate: extended.sign_degenerate,
        },
        aut_general: aut_general_guarantee(&dg),
        finite: finiteness(lattice)?,
        basis: "input".into(),
    })
}
