//! Command-line front end for `tenspec`.
//!
//! Every subcommand is a thin wrapper over library calls; the functions in
//! the submodules are public so the same paths can be driven from tests.

pub mod bench;
pub mod check;
pub mod gen;
pub mod solve;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tenspec::{SolverConfig, StopRule};

/// Exit codes shared by all subcommands.
pub mod exit {
    pub const OK: i32 = 0;
    /// Solver or check failure that is not one of the cases below.
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const MAX_ITER: i32 = 3;
    pub const INVALID_TENSOR: i32 = 4;
}

/// An error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tenspec",
    version,
    about = "Leading Z-eigenpairs of symmetric tensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a tensor and write it in TNSR/1.
    Gen(gen::GenArgs),
    /// Compute the leading eigenpair of a tensor file.
    Solve(solve::SolveArgs),
    /// Evaluate the eigen-residual of a candidate pair.
    Check(check::CheckArgs),
    /// Run a benchmark suite and write a CSV table.
    Bench(bench::BenchArgs),
}

/// Solver flags shared by `solve`; a config file is applied first and the
/// explicit flags override it.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverFlags {
    /// TOML file with solver settings (keys as the long flag names).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Run on the tensor as given instead of A / ||A||_F.
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long)]
    pub spectral_tol: Option<f64>,
    #[arg(long)]
    pub max_matvecs: Option<usize>,
    /// Start every eigen-subproblem from a random vector.
    #[arg(long)]
    pub no_warm_start: bool,
    /// On hitting max-iter, rerun once with tau scaled by this factor.
    #[arg(long)]
    pub retry_tau_factor: Option<f64>,
    /// `full` or `primal-gap`.
    #[arg(long)]
    pub stop_rule: Option<StopRule>,
}

impl SolverFlags {
    pub fn to_config(&self) -> Result<SolverConfig, Failure> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
                SolverConfig::from_toml_str(&text)
                    .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?
            }
            None => SolverConfig::default(),
        };
        if self.tau.is_some() {
            cfg.tau = self.tau;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        if self.no_normalize {
            cfg.normalize = false;
        }
        if let Some(t) = self.spectral_tol {
            cfg.spectral_tol = t;
        }
        if let Some(m) = self.max_matvecs {
            cfg.max_matvecs = m;
        }
        if self.no_warm_start {
            cfg.warm_start = false;
        }
        if self.retry_tau_factor.is_some() {
            cfg.retry_tau_factor = self.retry_tau_factor;
        }
        if let Some(r) = self.stop_rule {
            cfg.stop_rule = r;
        }
        cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(cfg)
    }
}

/// Runs a parsed command, writing regular output to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Gen(a) => gen::run(&a, out, err),
        Command::Solve(a) => solve::run(&a, out, err),
        Command::Check(a) => check::run(&a, out, err),
        Command::Bench(a) => bench::run(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
