use serde::Serialize;

use crate::error::SolveError;
use crate::spectra::{
    leading_eigpair_op, leading_singular_triple, singular_gap_top, spectral_gap_top_op,
    SpectralOptions,
};
use crate::tensor::{kron_power, DenseTensor};

/// Relative slack allowed between the top eigen/singular value of
/// `Mat(Λ)` and the value attained by the returned vector.
pub const CERT_TOL: f64 = 1e-6;
/// Top gap at or below which the test is reported as inconclusive.
pub const GAP_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certificate {
    GlobalCertified,
    StationaryOnly,
    Degenerate,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::GlobalCertified => "certified",
            Certificate::StationaryOnly => "stationary",
            Certificate::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    pub certificate: Certificate,
    /// Largest eigenvalue (even order) or singular value (odd order) of
    /// `Mat(Λ)`.
    pub top: f64,
    /// `<x^{⊗a}, Mat(Λ) x^{⊗b}>`.
    pub attained: f64,
    /// Top gap of `Mat(Λ)`, computed only when `x` attains the top.
    pub gap: Option<f64>,
}

/// Checks whether `x` attains the top of `Mat(Λ)`. A tensor whose
/// symmetrization is the working data and whose matricization peaks at
/// `x^{⊗a} (x^{⊗b})^T` certifies `x` as a global maximizer.
pub fn certify(
    lambda: &DenseTensor,
    x: &[f64],
    opts: &SpectralOptions,
) -> Result<Certification, SolveError> {
    let d = lambda.order();
    if x.len() != lambda.dim() {
        return Err(crate::error::TensorError::DimensionMismatch {
            expected: lambda.dim(),
            found: x.len(),
        }
        .into());
    }
    let view = lambda.matricize();
    let p = kron_power(x, d / 2);
    let q = kron_power(x, d.div_ceil(2));
    let attained = view.bilinear(&p, &q);
    let spectral = |source| SolveError::Spectral {
        iteration: 0,
        source,
    };
    let top = if d % 2 == 0 {
        leading_eigpair_op(&view, opts, Some(&p))
            .map_err(spectral)?
            .value
    } else {
        leading_singular_triple(&view, opts, Some((&p, &q)))
            .map_err(spectral)?
            .value
    };
    if top - attained > CERT_TOL * top.abs().max(1.0) {
        return Ok(Certification {
            certificate: Certificate::StationaryOnly,
            top,
            attained,
            gap: None,
        });
    }
    // A tied top leaves the leading direction ambiguous.
    let gap = if d % 2 == 0 {
        spectral_gap_top_op(&view, opts).map_err(spectral)?.gap
    } else {
        singular_gap_top(&view, opts).map_err(spectral)?.gap
    };
    let certificate = if gap <= GAP_FLOOR {
        Certificate::Degenerate
    } else {
        Certificate::GlobalCertified
    };
    Ok(Certification {
        certificate,
        top,
        attained,
        gap: Some(gap),
    })
}

/// `‖A x^{d-1} - σ x‖₂`.
pub fn eig_residual(a: &DenseTensor, x: &[f64], sigma: f64) -> Result<f64, SolveError> {
    let ax = a.apply(x)?;
    Ok(ax
        .iter()
        .zip(x)
        .map(|(u, v)| (u - sigma * v).powi(2))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_multiplier_certifies() {
        let x = [0.6, 0.8];
        let lam = DenseTensor::outer_power(&x, 4).unwrap();
        let c = certify(&lam, &x, &SpectralOptions::default()).unwrap();
        assert_eq!(c.certificate, Certificate::GlobalCertified);
        assert!((c.top - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wrong_vector_is_stationary_only() {
        let mut lam = DenseTensor::zeros(2, 2).unwrap();
        lam.set(&[0, 0], 2.0);
        lam.set(&[1, 1], 1.0);
        let c = certify(&lam, &[0.0, 1.0], &SpectralOptions::default()).unwrap();
        assert_eq!(c.certificate, Certificate::StationaryOnly);
        assert_eq!(c.gap, None);
        let c = certify(&lam, &[1.0, 0.0], &SpectralOptions::default()).unwrap();
        assert_eq!(c.certificate, Certificate::GlobalCertified);
        assert!((c.gap.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tied_top_is_degenerate_only_when_attained() {
        let mut lam = DenseTensor::zeros(2, 3).unwrap();
        lam.set(&[0, 0], 2.0);
        lam.set(&[1, 1], 2.0);
        let c = certify(&lam, &[1.0, 0.0, 0.0], &SpectralOptions::default()).unwrap();
        assert_eq!(c.certificate, Certificate::Degenerate);
        let c = certify(&lam, &[0.0, 0.0, 1.0], &SpectralOptions::default()).unwrap();
        assert_eq!(c.certificate, Certificate::StationaryOnly);
    }

    #[test]
    fn residual_of_matrix_eigenpair() {
        let mut a = DenseTensor::zeros(2, 2).unwrap();
        a.set(&[0, 0], 3.0);
        a.set(&[1, 1], -1.0);
        assert_eq!(eig_residual(&a, &[1.0, 0.0], 3.0).unwrap(), 0.0);
        assert!((eig_residual(&a, &[1.0, 0.0], 2.0).unwrap() - 1.0).abs() < 1e-15);
    }
}
