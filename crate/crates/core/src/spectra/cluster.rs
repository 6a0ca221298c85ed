use serde::Serialize;

use super::pencil::{OperatorPencil, RelaxationConfig};
use crate::mtf1d::theoretical_spectrum;
use crate::{Error, Result, C64};

/// Default cluster radius.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Points closer than this are merged in [`theoretical_points`].
const MERGE_TOL: f64 = 1e-12;

/// Fraction of eigenvalues near each accumulation point. Every eigenvalue is
/// assigned to its nearest point, so the fractions and the remainder add up
/// to one.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub epsilon: f64,
    pub points: Vec<C64>,
    pub fractions: Vec<f64>,
    pub remainder: f64,
}

impl ClusterReport {
    /// Sum of the per-point fractions.
    pub fn combined(&self) -> f64 {
        self.fractions.iter().sum()
    }

    /// Fraction for the point closest to `z`.
    pub fn fraction_near(&self, z: C64) -> Option<f64> {
        self.points
            .iter()
            .zip(&self.fractions)
            .min_by(|a, b| (a.0 - z).norm().total_cmp(&(b.0 - z).norm()))
            .map(|(_, &f)| f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    pub spectral_radius: f64,
    pub theoretical_points: Vec<C64>,
    pub cluster_report: ClusterReport,
}

/// Distinct values of `±√(σⱼ/(1+σⱼ))`.
pub fn theoretical_points(cfg: &RelaxationConfig) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for z in theoretical_spectrum(&cfg.sigmas) {
        if out.iter().all(|p| (p - z).norm() > MERGE_TOL) {
            out.push(z);
        }
    }
    out
}

pub fn cluster_report(eigs: &[C64], points: &[C64], epsilon: f64) -> Result<ClusterReport> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter {
            module: "spectra",
            reason: format!("cluster radius must be finite and non-negative, got {epsilon}"),
        });
    }
    let mut counts = vec![0usize; points.len()];
    let mut rest = 0usize;
    for z in eigs {
        let nearest = points
            .iter()
            .enumerate()
            .map(|(k, p)| (k, (p - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((k, d)) if d < epsilon => counts[k] += 1,
            _ => rest += 1,
        }
    }
    let total = eigs.len().max(1) as f64;
    Ok(ClusterReport {
        epsilon,
        points: points.to_vec(),
        fractions: counts.iter().map(|&c| c as f64 / total).collect(),
        remainder: if eigs.is_empty() { 0.0 } else { rest as f64 / total },
    })
}

impl SpectrumResult {
    pub fn from_eigenvalues(eigenvalues: Vec<C64>, cfg: &RelaxationConfig, epsilon: f64) -> Result<Self> {
        let points = theoretical_points(cfg);
        let cluster_report = cluster_report(&eigenvalues, &points, epsilon)?;
        let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Self {
            eigenvalues,
            spectral_radius,
            theoretical_points: points,
            cluster_report,
        })
    }
}

/// Eigenvalues of `pencil` with the cluster diagnostics for `cfg`.
pub fn spectrum(pencil: &OperatorPencil, cfg: &RelaxationConfig, epsilon: f64) -> Result<SpectrumResult> {
    SpectrumResult::from_eigenvalues(pencil.eigenvalues()?, cfg, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_equal_sigmas() {
        let cfg = RelaxationConfig::real(&[0.1, 0.1]).unwrap();
        let pts = theoretical_points(&cfg);
        assert_eq!(pts.len(), 2);
        assert!((pts[0].re - 0.301_511_344_577_763_6).abs() < 1e-15);
    }

    #[test]
    fn fractions_and_remainder() {
        let pts = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
        let eigs = [
            C64::new(1.01, 0.0),
            C64::new(0.99, 0.01),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let r = cluster_report(&eigs, &pts, 0.05).unwrap();
        assert_eq!(r.fractions, vec![0.5, 0.25]);
        assert_eq!(r.remainder, 0.25);
        assert_eq!(r.fraction_near(C64::new(-0.9, 0.0)), Some(0.25));
        let r0 = cluster_report(&eigs[..2], &pts, 0.0).unwrap();
        assert_eq!(r0.combined(), 0.0);
        assert!(cluster_report(&eigs, &pts, -1.0).is_err());
        assert!(cluster_report(&eigs, &pts, f64::NAN).is_err());
    }

    #[test]
    fn exact_spectrum_is_fully_clustered() {
        let cfg = RelaxationConfig::real(&[-0.4, 1.0]).unwrap();
        let p = super::super::pencil::jacobi_1d_2dom(2.0, &cfg).unwrap();
        let s = spectrum(&p, &cfg, 1e-9).unwrap();
        assert_eq!(s.cluster_report.combined(), 1.0);
        assert!((s.spectral_radius - (0.4f64 / 0.6).sqrt()).abs() < 1e-12);
    }
}
