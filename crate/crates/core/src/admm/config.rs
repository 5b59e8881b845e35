use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::spectra::SpectralOptions;

/// Which quantities the stopping test bounds by `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// `max(‖X^k - Y^k‖, ‖X^{k+1} - X^k‖, ‖Y^{k+1} - Y^k‖ / ‖Y^k‖)`.
    #[default]
    Full,
    /// `‖X^{k+1} - Y^{k+1}‖` alone.
    PrimalGap,
}

impl std::str::FromStr for StopRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(Self::Full),
            "primal-gap" => Ok(Self::PrimalGap),
            _ => Err(format!(
                "unknown stop rule `{s}` (expected full or primal-gap)"
            )),
        }
    }
}

/// Solver settings. Keys in a config file use the kebab-case field names,
/// which match the command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SolverConfig {
    /// Penalty parameter; `None` picks 0.1 for even order and 0.5 for odd.
    pub tau: Option<f64>,
    pub eps: f64,
    pub max_iter: usize,
    /// Work with `A / ‖A‖_F`.
    pub normalize: bool,
    pub spectral_tol: f64,
    pub max_matvecs: usize,
    /// Seed each subproblem with the previous factor.
    pub warm_start: bool,
    /// On hitting `max_iter`, rerun once with `tau * factor`.
    pub retry_tau_factor: Option<f64>,
    /// Record multiplier and `Y` consistency residuals in the trace.
    pub check_invariants: bool,
    pub stop_rule: StopRule,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tau: None,
            eps: 1e-4,
            max_iter: 1000,
            normalize: true,
            spectral_tol: 1e-10,
            max_matvecs: 5000,
            warm_start: true,
            retry_tau_factor: None,
            check_invariants: true,
            stop_rule: StopRule::Full,
        }
    }
}

impl SolverConfig {
    pub fn tau_for(&self, order: usize) -> f64 {
        self.tau.unwrap_or(if order % 2 == 0 { 0.1 } else { 0.5 })
    }

    pub fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions {
            tol: self.spectral_tol,
            max_matvecs: self.max_matvecs,
            ..SpectralOptions::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |m: String| Err(SolveError::InvalidConfig(m));
        if let Some(t) = self.tau {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tau must be positive and finite, got {t}"));
            }
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if self.max_iter == 0 {
            return bad("max-iter must be at least 1".into());
        }
        if !(self.spectral_tol > 0.0 && self.spectral_tol < 1.0) {
            return bad(format!(
                "spectral-tol must lie in (0, 1), got {}",
                self.spectral_tol
            ));
        }
        if self.max_matvecs == 0 {
            return bad("max-matvecs must be at least 1".into());
        }
        if let Some(f) = self.retry_tau_factor {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("retry-tau-factor must lie in (0, 1), got {f}"));
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; unknown keys are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self, SolveError> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| SolveError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
