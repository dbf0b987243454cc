//! Command-line front end: Pell queries, single-lattice classification
//! reports, reference-table regeneration with errata annotations, and batch
//! sweeps.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use autok3_core::classify::ClassifyOptions;
use autok3_core::exactmath::IntMatrix2;
use autok3_core::forms::EvenLattice;
use autok3_core::pell::{epsilon_vector, solve, PellOutcome, PellRhs};
use autok3_core::report::{build_report, LatticeReport, SCHEMA_VERSION};
use autok3_core::tables::{
    diagonal_action_table, format_involution, format_power, nondiagonal_action_table, pell_table,
};
use autok3_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

const DEFAULT_MAX_PELL_BITS: u64 = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "autok3",
    about = "Exact classification of isometry groups of indefinite even binary lattices",
    version
)]
pub struct Cli {
    /// Emit JSON instead of text/TSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Suppress informational messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Abort (exit 3) when Pell solutions exceed this many bits.
    /// Defaults to AUTOK3_MAX_PELL_BITS or 4096.
    #[arg(long, global = true)]
    pub max_pell_bits: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal positive solution of x^2 - d*y^2 = rhs.
    Pell {
        /// The non-square positive integer d.
        d: BigInt,
        /// Right-hand side: 1, -1, 4 or -4.
        #[arg(long, default_value = "4", allow_hyphen_values = true)]
        rhs: i64,
        /// Also print the eps(p) fingerprint of the minimal rhs = 1 solution.
        #[arg(long)]
        epsilon: bool,
    },
    /// Classify the extended isometry group of an even lattice.
    Classify(ClassifyArgs),
    /// Regenerate reference table 1, 2 or 3 as TSV with errata annotations.
    Table {
        /// Which table: 1 (Pell solutions), 2 (diagonal forms),
        /// 3 (non-diagonal forms).
        which: u8,
    },
    /// Classify every lattice 2n(ax^2+bxy+cy^2) in the given ranges.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Gram matrix entries, row major: g11 g12 g21 g22.
    #[arg(long, num_args = 4, allow_hyphen_values = true, value_names = ["G11", "G12", "G21", "G22"])]
    pub gram: Option<Vec<BigInt>>,
    /// Form coefficients a b c of q = ax^2 + bxy + cy^2 (used with --n).
    #[arg(long, num_args = 3, allow_hyphen_values = true, value_names = ["A", "B", "C"], conflicts_with = "gram")]
    pub form: Option<Vec<BigInt>>,
    /// Scale n of the lattice 2nq.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub n: BigInt,
    /// Print generator matrices in the text output.
    #[arg(long)]
    pub generators: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Range (inclusive) for the scale n.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["MIN", "MAX"], default_values = ["1", "1"])]
    pub n: Vec<i64>,
    /// Range for a.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["MIN", "MAX"])]
    pub a: Vec<i64>,
    /// Range for b.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["MIN", "MAX"])]
    pub b: Vec<i64>,
    /// Range for c.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["MIN", "MAX"])]
    pub c: Vec<i64>,
    /// Keep only lattices with this extended-group kind
    /// (trivial, cyclic2, cyclic, dihedral).
    #[arg(long)]
    pub kind: Option<String>,
    /// Keep only lattices with form discriminant at most this value.
    #[arg(long)]
    pub d_max: Option<i64>,
}

/// Classification of a run error into the documented exit codes.
pub fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::PellBitsExceeded { .. } => EXIT_GUARD,
        _ => EXIT_INVALID,
    }
}

fn effective_limit(cli: &Cli) -> Option<u64> {
    if let Some(b) = cli.max_pell_bits {
        return Some(b);
    }
    if let Ok(v) = std::env::var("AUTOK3_MAX_PELL_BITS") {
        if let Ok(b) = v.parse::<u64>() {
            return Some(b);
        }
    }
    Some(DEFAULT_MAX_PELL_BITS)
}

fn fmt_matrix(rows: &[[String; 2]; 2]) -> String {
    format!(
        "[{} {}; {} {}]",
        rows[0][0], rows[0][1], rows[1][0], rows[1][1]
    )
}

fn kind_filter_matches(filter: &str, kind: &str) -> bool {
    matches!(
        (filter, kind),
        ("trivial", "trivial")
            | ("cyclic2", "cyclic_order_2")
            | ("cyclic", "infinite_cyclic")
            | ("dihedral", "infinite_dihedral")
    )
}

fn run_pell(
    out: &mut impl Write,
    cli: &Cli,
    d: &BigInt,
    rhs: i64,
    epsilon: bool,
) -> Result<(), CoreError> {
    let rhs_enum = match rhs {
        1 => PellRhs::One,
        -1 => PellRhs::MinusOne,
        4 => PellRhs::Four,
        -4 => PellRhs::MinusFour,
        other => {
            return Err(CoreError::UnsupportedTarget(BigInt::from(other)));
        }
    };
    let limit = effective_limit(cli);
    let outcome = solve(d, rhs_enum, limit)?;
    let eps = if epsilon {
        Some(epsilon_vector(d, limit)?)
    } else {
        None
    };
    if cli.json {
        let (status, solution) = match &outcome {
            PellOutcome::Minimal(s) => ("minimal", Some([s.u.to_string(), s.v.to_string()])),
            PellOutcome::TrivialOnly => ("trivial_only", None),
            PellOutcome::Unsolvable => ("unsolvable", None),
        };
        let doc = serde_json::json!({
            "schema": SCHEMA_VERSION,
            "d": d.to_string(),
            "rhs": rhs,
            "status": status,
            "solution": solution,
            "epsilon": eps.map(|e| e.entries.iter()
                .map(|(p, s)| (p.to_string(), *s))
                .collect::<Vec<_>>()),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).ok();
    } else {
        writeln!(out, "x^2 - {d}*y^2 = {rhs}").ok();
        match &outcome {
            PellOutcome::Minimal(s) => {
                writeln!(out, "minimal solution: ({}, {})", s.u, s.v).ok();
            }
            PellOutcome::TrivialOnly => {
                writeln!(out, "only trivial solutions (d is a perfect square)").ok();
            }
            PellOutcome::Unsolvable => {
                writeln!(out, "unsolvable").ok();
            }
        }
        if let Some(e) = eps {
            let parts: Vec<String> = e
                .entries
                .iter()
                .map(|(p, s)| format!("eps({p})={}", if *s == 1 { "+1" } else { "-1" }))
                .collect();
            writeln!(out, "{}", parts.join(" ")).ok();
        }
    }
    Ok(())
}

fn lattice_from_args(args: &ClassifyArgs) -> Result<EvenLattice, CoreError> {
    if let Some(g) = &args.gram {
        let m = IntMatrix2::new(g[0].clone(), g[1].clone(), g[2].clone(), g[3].clone());
        return EvenLattice::from_gram(&m);
    }
    if let Some(f) = &args.form {
        let q = autok3_core::forms::BinaryForm::new(f[0].clone(), f[1].clone(), f[2].clone());
        return EvenLattice::new(args.n.clone(), q);
    }
    Err(CoreError::DegenerateLattice)
}

fn print_report_text(out: &mut impl Write, rep: &LatticeReport, generators: bool) {
    writeln!(out, "gram: {}", fmt_matrix(&rep.gram)).ok();
    writeln!(
        out,
        "form: n={}, q=({}, {}, {}), d={}{}",
        rep.n,
        rep.form[0],
        rep.form[1],
        rep.form[2],
        rep.discriminant,
        if rep.square_discriminant { " (square)" } else { "" }
    )
    .ok();
    let snf = if rep.disc_group.snf_type.is_empty() {
        "trivial".to_string()
    } else {
        rep.disc_group
            .snf_type
            .iter()
            .map(|x| format!("Z/{x}"))
            .collect::<Vec<_>>()
            .join(" x ")
    };
    writeln!(out, "disc group: order {}, {}", rep.disc_group.order, snf).ok();
    match &rep.roots {
        Some(r) => {
            let roots: Vec<String> = r
                .basic_roots
                .iter()
                .map(|v| format!("({}, {})", v[0], v[1]))
                .collect();
            writeln!(out, "roots: {}", roots.join(", ")).ok();
        }
        None => {
            writeln!(out, "roots: none").ok();
        }
    }
    match &rep.ambiguous {
        Some(a) => {
            writeln!(
                out,
                "ambiguous: {}, target ({}, {}, {})",
                a.kind, a.target[0], a.target[1], a.target[2]
            )
            .ok();
        }
        None if !rep.square_discriminant => {
            writeln!(out, "ambiguous: no").ok();
        }
        None => {}
    }
    writeln!(
        out,
        "extended group: {} (branch: {}{})",
        rep.extended.kind,
        rep.extended.branch,
        if rep.extended.sign_degenerate {
            ", sign-degenerate disc"
        } else {
            ""
        }
    )
    .ok();
    if generators {
        for g in &rep.extended.generators {
            writeln!(
                out,
                "  generator (eps={:+}): {}",
                g.epsilon,
                fmt_matrix(&g.matrix)
            )
            .ok();
        }
        if let Some(t) = &rep.extended.translation {
            writeln!(
                out,
                "  translation (eps={:+}): {}",
                t.epsilon,
                fmt_matrix(&t.matrix)
            )
            .ok();
        }
    }
    writeln!(out, "orthochronous group: {}", rep.orthochronous.kind).ok();
    writeln!(
        out,
        "aut-general guaranteed: {}",
        if rep.aut_general { "yes" } else { "no" }
    )
    .ok();
    writeln!(out, "finite: {}", if rep.finite { "yes" } else { "no" }).ok();
}

fn run_classify(out: &mut impl Write, cli: &Cli, args: &ClassifyArgs) -> Result<(), CoreError> {
    let lattice = lattice_from_args(args)?;
    let opts = ClassifyOptions {
        max_pell_bits: effective_limit(cli),
    };
    let rep = build_report(&lattice, &opts)?;
    if cli.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rep).unwrap()).ok();
    } else {
        print_report_text(out, &rep, args.generators);
    }
    Ok(())
}

/// TSV rendering of table 1 (Pell solutions with eps fingerprints).
pub fn render_pell_table() -> String {
    let mut s = String::from("d\tfactorization\tN=1\tN=4\teps\terratum\n");
    for row in pell_table() {
        let eps: Vec<String> = row
            .epsilon
            .iter()
            .map(|(_, e)| if *e == 1 { "+1".into() } else { "-1".to_string() })
            .collect();
        let err = if row.errata.is_empty() {
            "-".to_string()
        } else {
            row.errata.join("; ")
        };
        s.push_str(&format!(
            "{}\t{}\t({},{})\t({},{})\t({})\t{}\n",
            row.d,
            row.factorization,
            row.one.0,
            row.one.1,
            row.four.0,
            row.four.1,
            eps.join(","),
            err
        ));
    }
    s
}

/// TSV rendering of table 2 (diagonal) or table 3 (non-diagonal).
pub fn render_action_table(which: u8) -> Result<String, CoreError> {
    let rows = if which == 2 {
        diagonal_action_table()?
    } else {
        nondiagonal_action_table()?
    };
    let mut s = String::from("a\tc\tpower\tinvolution\terratum\n");
    for row in rows {
        let err = if row.errata.is_empty() {
            "-".to_string()
        } else {
            row.errata.join("; ")
        };
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row.a,
            row.c,
            format_power(row.power),
            format_involution(row.involution),
            err
        ));
    }
    Ok(s)
}

fn run_table(out: &mut impl Write, which: u8) -> Result<(), CoreError> {
    let text = match which {
        1 => render_pell_table(),
        2 | 3 => render_action_table(which)?,
        other => {
            return Err(CoreError::UnsupportedTarget(BigInt::from(other)));
        }
    };
    write!(out, "{text}").ok();
    Ok(())
}

fn run_sweep(
    out: &mut impl Write,
    err_out: &mut impl Write,
    cli: &Cli,
    args: &SweepArgs,
) -> Result<(), CoreError> {
    let opts = ClassifyOptions {
        max_pell_bits: effective_limit(cli),
    };
    let range = |v: &Vec<i64>| (v[0], v[1]);
    let (n_lo, n_hi) = range(&args.n);
    let (a_lo, a_hi) = range(&args.a);
    let (b_lo, b_hi) = range(&args.b);
    let (c_lo, c_hi) = range(&args.c);
    if n_lo > n_hi || a_lo > a_hi || b_lo > b_hi || c_lo > c_hi {
        if !cli.quiet {
            writeln!(err_out, "warning: empty sweep range").ok();
        }
        return Ok(());
    }
    if !cli.json {
        writeln!(
            out,
            "n\ta\tb\tc\td\tkind\tbranch\tdisc_order\tsnf\tfinite\taut_general"
        )
        .ok();
    }
    let mut emitted = 0usize;
    for n in n_lo..=n_hi {
        if n == 0 {
            continue;
        }
        for a in a_lo..=a_hi {
            for b in b_lo..=b_hi {
                for c in c_lo..=c_hi {
                    let q = autok3_core::forms::BinaryForm::new(a, b, c);
                    if !q.is_primitive() {
                        continue;
                    }
                    let d = q.discriminant();
                    if d <= BigInt::from(0) {
                        continue;
                    }
                    if let Some(dm) = args.d_max {
                        if d > BigInt::from(dm) {
                            continue;
                        }
                    }
                    let lattice = EvenLattice::new(n, q)?;
                    let rep = build_report(&lattice, &opts)?;
                    if let Some(k) = &args.kind {
                        if !kind_filter_matches(k, &rep.extended.kind) {
                            continue;
                        }
                    }
                    emitted += 1;
                    if cli.json {
                        writeln!(out, "{}", serde_json::to_string(&rep).unwrap()).ok();
                    } else {
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            n,
                            a,
                            b,
                            c,
                            d,
                            rep.extended.kind,
                            rep.extended.branch,
                            rep.disc_group.order,
                            if rep.disc_group.snf_type.is_empty() {
                                "1".to_string()
                            } else {
                                rep.disc_group.snf_type.join(",")
                            },
                            rep.finite,
                            rep.aut_general
                        )
                        .ok();
                    }
                }
            }
        }
    }
    if emitted == 0 && !cli.quiet {
        writeln!(err_out, "warning: no lattice matched the sweep filters").ok();
    }
    Ok(())
}

/// Executes a parsed command, writing to the given streams; returns the
/// process exit code.
pub fn run(cli: &Cli, out: &mut impl Write, err_out: &mut impl Write) -> i32 {
    let result = match &cli.command {
        Command::Pell { d, rhs, epsilon } => run_pell(out, cli, d, *rhs, *epsilon),
        Command::Classify(args) => run_classify(out, cli, args),
        Command::Table { which } => run_table(out, *which),
        Command::Sweep(args) => run_sweep(out, err_out, cli, args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let code = exit_code_for(&e);
            if code == EXIT_GUARD {
                writeln!(
                    err_out,
                    "error: {e}; re-run with a larger --max-pell-bits (or AUTOK3_MAX_PELL_BITS) to continue"
                )
                .ok();
            } else {
                writeln!(err_out, "error: {e}").ok();
            }
            code
        }
    }
}
