//! `asdk`: runs the verification suites and reports pass/fail per check.
//!
//! Exit codes: 0 when every check passes, 1 when one fails, 2 for usage
//! errors, 3 when the structure file does not parse.

use std::path::PathBuf;
use std::process::ExitCode;

use asdk_core::structure::{parse_eds, SHIPPED_EDS};
use asdk_core::suites::{self, Options};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "asdk", version, about = "Exact and numeric checks for a Kähler-surface structure system")]
struct Cli {
    #[command(subcommand)]
    suite: Suite,

    /// Structure equations to load instead of the shipped file.
    #[arg(long, global = true, value_name = "FILE")]
    eds: Option<PathBuf>,

    /// Also write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Seed for sampled points and angles.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    /// Number of points in the numeric sweep.
    #[arg(long, global = true, default_value_t = 100)]
    points: usize,

    /// Record per-check wall time (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Suite {
    /// Torsion, curvature, connection and covariant derivatives.
    Structure,
    /// The twelve coefficient relations of the connection.
    Nel,
    /// The solved connection components and their consequences.
    Sol,
    /// Membership of every transcribed second-order equation.
    Equations36,
    /// Linear dependence relations among the transcriptions.
    Combos,
    /// The 32-element symmetry group and rotations.
    Symmetry,
    /// Elimination with constant lambda.
    CaseConstLambda,
    /// Elimination with lambda1 = lambda2 = lambda4 = 0.
    CaseIi,
    /// Elimination with sigma a function of lambda.
    CaseIii,
    /// Seeded floating-point sweep of the curvature tensor.
    Numeric,
    /// Every suite in turn.
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Nel => "nel",
            Suite::Sol => "sol",
            Suite::Equations36 => "equations36",
            Suite::Combos => "combos",
            Suite::Symmetry => "symmetry",
            Suite::CaseConstLambda => "case-const-lambda",
            Suite::CaseIi => "case-ii",
            Suite::CaseIii => "case-iii",
            Suite::Numeric => "numeric",
            Suite::All => "all",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }

    let (text, origin) = match &cli.eds {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => (t, p.display().to_string()),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => (SHIPPED_EDS.to_string(), "weakly-einstein.eds".to_string()),
    };
    let sys = match parse_eds(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {origin}: {e}");
            return ExitCode::from(3);
        }
    };

    let opts = Options {
        seed: cli.seed,
        points: cli.points,
        tol: cli.tol,
        timings: cli.timings,
    };
    let report = suites::run(cli.suite.name(), &sys, &opts).expect("every subcommand names a suite");
    print!("{report}");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
