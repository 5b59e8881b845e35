use std::io::Write;

use serde::Serialize;

/// One ADMM iteration. `iter` counts from 1 and the norms refer to the
/// iterates produced by that iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    /// `‖X - Y‖_F`.
    pub primal_gap: f64,
    /// `‖X - X_prev‖_F`.
    pub dx: f64,
    /// `‖Y - Y_prev‖_F / ‖Y_prev‖_F`; absent on the first iteration.
    pub dy_rel: Option<f64>,
    /// `<A, X>` in the input's scale.
    pub objective: f64,
    /// `‖Sym(Λ) - A_w‖_F`.
    pub multiplier_residual: Option<f64>,
    /// `‖Y - Sym(X)‖_F`.
    pub y_consistency: Option<f64>,
}

/// CSV with columns `iter,primal_gap,dx,dy_rel,objective`; an undefined
/// `dy_rel` is left empty.
pub fn write_trace_csv<W: Write>(mut w: W, rows: &[TraceRow]) -> std::io::Result<()> {
    writeln!(w, "iter,primal_gap,dx,dy_rel,objective")?;
    for r in rows {
        let dy = r.dy_rel.map(|v| format!("{v:e}")).unwrap_or_default();
        writeln!(
            w,
            "{},{:e},{:e},{},{:.17e}",
            r.iter, r.primal_gap, r.dx, dy, r.objective
        )?;
    }
    w.flush()
}
