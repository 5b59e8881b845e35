use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use tenspec::eig_residual;

use crate::solve::read_input;
use crate::{exit, Failure};

/// Pass threshold relative to `‖A‖_F`.
pub const CHECK_TOL: f64 = 1e-4;

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// TNSR/1 tensor file.
    pub input: PathBuf,
    /// File with the n entries of x, separated by whitespace or commas.
    pub x_file: PathBuf,
    #[arg(allow_negative_numbers = true)]
    pub sigma: f64,
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .map(str::to_owned)
                .collect::<Vec<_>>()
        })
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::usage(format!("{}: invalid number `{t}`", path.display())))
        })
        .collect()
}

pub fn run(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let a = read_input(&args.input)?;
    let mut x = read_vector(&args.x_file)?;
    if x.len() != a.dim() {
        return Err(Failure::usage(format!(
            "x has {} entries, tensor dimension is {}",
            x.len(),
            a.dim()
        )));
    }
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx == 0.0 {
        return Err(Failure::usage("x is the zero vector"));
    }
    if (nx - 1.0).abs() > 1e-12 {
        let _ = writeln!(err, "warning: ||x|| = {nx:.6e}, normalizing");
        x.iter_mut().for_each(|v| *v /= nx);
    }
    let res = eig_residual(&a, &x, args.sigma).map_err(|e| Failure::usage(e.to_string()))?;
    let rq = a.rayleigh(&x).map_err(|e| Failure::usage(e.to_string()))?;
    let bound = CHECK_TOL * a.frob_norm();
    let pass = res <= bound;
    let io = |e: std::io::Error| Failure::new(exit::FAILURE, e.to_string());
    writeln!(out, "residual     {res:.6e}").map_err(io)?;
    writeln!(out, "bound        {bound:.6e}").map_err(io)?;
    writeln!(out, "<A, x^d>     {rq:.10}").map_err(io)?;
    writeln!(
        out,
        "verdict      {}",
        if pass {
            "eigenpair"
        } else {
            "not an eigenpair"
        }
    )
    .map_err(io)?;
    Ok(if pass { exit::OK } else { exit::FAILURE })
}
