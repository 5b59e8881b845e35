use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use serde::Serialize;
use tenspec::tensor::read_tnsr_file;
use tenspec::{
    solve, solve_simplified, write_trace_csv, DenseTensor, SolveError, SolveStatus, SolverConfig,
    SolverReport, TensorError,
};

use crate::{exit, Failure, SolverFlags};

pub const SCHEMA: &str = "tenspec/1";

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// TNSR/1 input file.
    pub input: PathBuf,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Solve for -A instead of A.
    #[arg(long)]
    pub negate: bool,
    /// Use the Y-free update form of the iteration.
    #[arg(long)]
    pub simplified: bool,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

/// JSON report, schema `tenspec/1`.
#[derive(Debug, Serialize)]
pub struct SolveJson {
    pub schema: &'static str,
    pub input: String,
    pub negated: bool,
    pub order: usize,
    pub dim: usize,
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    pub status: &'static str,
    pub residual: f64,
    pub certificate: &'static str,
    pub tau: f64,
    pub eps: f64,
    pub normalized: bool,
    pub retried: bool,
    pub extraction_error: f64,
    pub subproblem_matvecs: usize,
    pub wall_time_s: f64,
}

pub fn status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Converged => "converged",
        SolveStatus::MaxIter => "max-iter",
    }
}

pub fn read_input(path: &Path) -> Result<DenseTensor, Failure> {
    read_tnsr_file(path).map_err(|e| match e {
        TensorError::Io(io) => Failure::usage(format!("{}: {io}", path.display())),
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

/// Maps solver errors onto exit codes.
pub fn solve_failure(e: SolveError) -> Failure {
    let code = match &e {
        SolveError::NotSymmetric { .. } | SolveError::ZeroTensor | SolveError::OrderTooSmall(_) => {
            exit::INVALID_TENSOR
        }
        SolveError::InvalidConfig(_) => exit::USAGE,
        _ => exit::FAILURE,
    };
    Failure::new(code, e.to_string())
}

/// Loads, optionally negates and solves; returns the report and wall time.
pub fn solve_file(
    path: &Path,
    cfg: &SolverConfig,
    negate: bool,
    simplified: bool,
) -> Result<(SolverReport, f64), Failure> {
    let mut a = read_input(path)?;
    if negate {
        a = -&a;
    }
    let t0 = Instant::now();
    let r = if simplified {
        solve_simplified(&a, cfg)
    } else {
        solve(&a, cfg)
    };
    let report = r.map_err(solve_failure)?;
    Ok((report, t0.elapsed().as_secs_f64()))
}

pub fn run(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = args.solver.to_config()?;
    let (report, secs) = solve_file(&args.input, &cfg, args.negate, args.simplified)?;
    let io = |e: std::io::Error| Failure::new(exit::FAILURE, e.to_string());

    if let Some(p) = &args.trace {
        let f = std::fs::File::create(p)
            .map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", p.display())))?;
        write_trace_csv(std::io::BufWriter::new(f), &report.trace).map_err(io)?;
    }

    if args.json {
        let j = SolveJson {
            schema: SCHEMA,
            input: args.input.display().to_string(),
            negated: args.negate,
            order: report.multiplier.order(),
            dim: report.eigenvector.len(),
            eigenvalue: report.eigenvalue,
            eigenvector: report.eigenvector.clone(),
            iterations: report.iterations,
            status: status_str(report.status),
            residual: report.residual,
            certificate: report.certificate.as_str(),
            tau: report.tau,
            eps: cfg.eps,
            normalized: cfg.normalize,
            retried: report.retried,
            extraction_error: report.extraction_error,
            subproblem_matvecs: report.subproblem_matvecs,
            wall_time_s: secs,
        };
        let text = serde_json::to_string_pretty(&j)
            .map_err(|e| Failure::new(exit::FAILURE, e.to_string()))?;
        writeln!(out, "{text}").map_err(io)?;
    } else {
        let x: Vec<String> = report
            .eigenvector
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect();
        writeln!(out, "sigma        {:.10}", report.eigenvalue).map_err(io)?;
        writeln!(out, "x            [{}]", x.join(", ")).map_err(io)?;
        writeln!(
            out,
            "iterations   {} ({})",
            report.iterations,
            status_str(report.status)
        )
        .map_err(io)?;
        writeln!(out, "residual     {:.3e}", report.residual).map_err(io)?;
        writeln!(out, "certificate  {}", report.certificate.as_str()).map_err(io)?;
        writeln!(
            out,
            "tau          {}{}",
            report.tau,
            if report.retried { " (retried)" } else { "" }
        )
        .map_err(io)?;
        writeln!(out, "time         {secs:.4} s").map_err(io)?;
    }

    if report.status == SolveStatus::MaxIter {
        let _ = writeln!(
            err,
            "warning: stopped at max-iter {} without meeting eps {}",
            cfg.max_iter, cfg.eps
        );
        return Ok(exit::MAX_ITER);
    }
    Ok(exit::OK)
}
