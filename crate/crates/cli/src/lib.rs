//! The `grpd-conv` command line. [`run`] parses arguments, executes one
//! subcommand and returns the exit code together with the text for stdout.
//!
//! Exit codes: 0 when every certificate in the report passes, 1 when one
//! fails, 2 for usage errors and unreadable input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod json;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
}

#[derive(Parser, Debug)]
#[command(
    name = "grpd-conv",
    version,
    about = "Convolution algebras of finite groupoids and bibundle functoriality checks",
    after_help = "Every command prints a JSON report. GRPD_CONV_THREADS caps the catalog thread pool."
)]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a JSON document parses and satisfies its axioms.
    Validate {
        kind: DocKind,
        file: PathBuf,
        /// Groupoid the Haar system or element refers to.
        #[arg(long)]
        groupoid: Option<PathBuf>,
    },
    /// Convolution algebra of a groupoid.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Bibundles between groupoids.
    #[command(subcommand)]
    Bibundle(BibundleCommand),
    /// Balanced tensor product M(P) ⊗ M(Q) with its induced actions.
    Tensor {
        p: PathBuf,
        q: PathBuf,
        #[command(flatten)]
        haar: ChainHaar,
    },
    /// Certify that τ̂ maps M(P) ⊗ M(Q) isomorphically onto M(P∘Q).
    TauCheck {
        p: PathBuf,
        q: PathBuf,
        #[command(flatten)]
        haar: ChainHaar,
    },
    /// Biprincipality of P and both composites with the opposite bibundle.
    MoritaCheck {
        p: PathBuf,
        #[command(flatten)]
        haar: PairHaar,
    },
    /// Gauge of a point with respect to a polytopal disk.
    Gauge {
        #[arg(long)]
        disk: PathBuf,
        /// Comma-separated rationals, e.g. "1/2,1/2".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Gauges of v_n − v against n and the fitted decay exponent.
    Mackey {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        disk: PathBuf,
        /// The sequence counts as convergent below this log-log slope.
        #[arg(long, default_value_t = -0.1, allow_hyphen_values = true)]
        slope_threshold: f64,
    },
    /// Mollifier experiments: Dirac rate, fiber integration, group convolution.
    DiracRun {
        #[arg(long, value_enum, default_value_t = Profile::Std)]
        profile: Profile,
        /// Scales as "a..b" (inclusive) or a comma-separated list.
        #[arg(long, default_value = "1..64")]
        n: String,
    },
    /// Averaging experiment on the rotation algebra.
    TorusRun {
        /// "golden", a fraction "p/q" or a decimal.
        #[arg(long, default_value = "golden")]
        theta: String,
        /// Laurent polynomial in u and v, e.g. "u+v" or "2u^3v^-1 - 0.5".
        #[arg(long, default_value = "u+v")]
        element: String,
        #[arg(long, default_value_t = 4000)]
        n_max: u32,
        /// Largest n at which the literal sums are also evaluated.
        #[arg(long, default_value_t = 512)]
        literal_max: u32,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Run the example catalog, optionally with seeded random chains.
    Catalog {
        /// Record per-entry wall-clock times in the report.
        #[arg(long)]
        timings: bool,
        #[arg(long, default_value_t = 0)]
        random_pairs: usize,
        #[arg(long, default_value_t = 0)]
        random_triples: usize,
        /// Required whenever random chains are requested.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCommand {
    /// Structure constants of δ_g * δ_h.
    StructureConstants {
        groupoid: PathBuf,
        #[arg(long)]
        haar: Option<PathBuf>,
    },
    /// Check that a matrix is an algebra isomorphism A(G) → A(H).
    IsoCheck {
        #[arg(long)]
        map: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        haar_a: Option<PathBuf>,
        #[arg(long)]
        haar_b: Option<PathBuf>,
    },
    /// Check that the span of the given elements is a two-sided ideal.
    IdealCheck {
        groupoid: PathBuf,
        #[arg(required = true)]
        elements: Vec<PathBuf>,
        #[arg(long)]
        haar: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BibundleCommand {
    /// Right principality, with witnesses when it fails.
    PrincipalCheck {
        p: PathBuf,
        /// Require the left action to be principal as well.
        #[arg(long)]
        both: bool,
    },
    /// The composite P ∘ Q in canonical form.
    Compose { p: PathBuf, q: PathBuf },
    /// Same as the top-level morita-check.
    MoritaCheck {
        p: PathBuf,
        #[command(flatten)]
        haar: PairHaar,
    },
}

#[derive(Args, Debug)]
struct PairHaar {
    #[arg(long)]
    haar_left: Option<PathBuf>,
    #[arg(long)]
    haar_right: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainHaar {
    #[arg(long)]
    haar_left: Option<PathBuf>,
    #[arg(long)]
    haar_middle: Option<PathBuf>,
    #[arg(long)]
    haar_right: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DocKind {
    Groupoid,
    Haar,
    Bibundle,
    Element,
    Disk,
    Sequence,
    Matrix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    /// The standard bump exp(−1/(1−|y|²)) and the built-in test functions.
    Std,
}

/// Runs the command line `argv` (program name first).
pub fn run(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let echo = argv.get(1..).unwrap_or_default().to_vec();
    let mut ctx = commands::Context::new(&echo);
    match commands::execute(&mut ctx, &cli.command) {
        Ok(()) => {}
        Err(e) => return (2, format!("error: {e}\n")),
    }
    let report = ctx.finish();
    let text = report.to_json();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return (2, format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    (if report.passed { 0 } else { 1 }, text)
}
