//! `pcm`: efficiency checks, Perron reports, generators and fixture
//! reproduction for pairwise comparison matrices.
//!
//! Exit codes: 0 success (or efficient), 1 inefficient / fixture mismatch,
//! 2 input error, 3 internal inconsistency.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcm_core::scalar::{TAU_EDGE, TAU_PERRON};
use pcm_core::PcmError;

use render::{Format, Renderer};

#[derive(Parser, Debug)]
#[command(
    name = "pcm",
    version,
    about = "Pareto efficiency of weight vectors for pairwise comparison matrices"
)]
struct Cli {
    /// Numeric backend; `auto` is exact unless a literal or the matrix needs floats.
    #[arg(long, value_enum, default_value_t = BackendArg::Auto, global = true)]
    backend: BackendArg,
    /// Edge tolerance for the float backend, in (0, 1e-3).
    #[arg(long, value_parser = parse_tol, global = true)]
    tol_edge: Option<f64>,
    /// Perron convergence tolerance, in (0, 1e-3).
    #[arg(long, value_parser = parse_tol, global = true)]
    tol_perron: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Number of vectors to generate.
    #[arg(long, default_value_t = 10, global = true)]
    count: usize,
    /// Disable colored table output; any non-false value of `PCM_NO_COLOR` also disables it.
    #[arg(long, env = "PCM_NO_COLOR", global = true, value_parser = clap::builder::FalseyValueParser::new())]
    no_color: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Auto,
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a vector is efficient for a matrix (exit 0 efficient, 1 not).
    Check { matrix: PathBuf, vector: PathBuf },
    /// Perron eigenpair, its efficiency and the block-perturbation report.
    Perron { matrix: PathBuf },
    /// Emit efficient vectors for a block perturbed consistent matrix, as JSON lines.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Re-check the bundled fixtures (exit 1 on any mismatch).
    Reproduce {
        #[arg(value_enum, default_value_t = Target::All)]
        target: Target,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenerateKind {
    /// `S(x)`: ones except `a12 = x`.
    #[command(name = "2block")]
    TwoBlock {
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
    },
    /// `A_n(B)` with `B` the 3-by-3 block `(a12, a13, a23)`.
    #[command(name = "3block")]
    ThreeBlock {
        #[arg(long)]
        a12: String,
        #[arg(long)]
        a13: String,
        #[arg(long)]
        a23: String,
        #[arg(long)]
        n: usize,
    },
    /// `A_n(C_s(x))` with the constant block `C_s(x)`.
    Constant {
        #[arg(long)]
        x: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Examples,
    All,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1e-3 {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in (0, 1e-3), got {s}"))
    }
}

pub struct Config {
    pub backend: BackendArg,
    pub tol_edge: f64,
    pub tol_perron: f64,
    pub seed: u64,
    pub count: usize,
    pub out: Renderer,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        backend: cli.backend,
        tol_edge: cli.tol_edge.unwrap_or(TAU_EDGE),
        tol_perron: cli.tol_perron.unwrap_or(TAU_PERRON),
        seed: cli.seed,
        count: cli.count,
        out: Renderer::new(cli.format, cli.no_color),
    };
    let result = match cli.command {
        Command::Check { matrix, vector } => commands::check(&matrix, &vector, &cfg),
        Command::Perron { matrix } => commands::perron(&matrix, &cfg),
        Command::Generate { kind } => commands::generate(&kind, &cfg),
        Command::Reproduce { target } => commands::reproduce(target, &cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(
                e.downcast_ref::<PcmError>(),
                Some(PcmError::TheoremViolation(_))
            );
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}
