use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::cluster::SpectrumResult;
use super::pencil::{OperatorPencil, RelaxationConfig};
use crate::{Error, Result, C64};

/// Grid points closer than this to `−1` are dropped.
const POLE_GAP: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub sigma: f64,
    pub rho: f64,
    pub n_eigs: usize,
    pub fractions: Vec<f64>,
    pub remainder: f64,
}

/// `steps` equispaced values in `[min, max]`, without `σ = −1`.
pub fn sigma_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min > max || steps == 0 {
        return Err(Error::Parameter {
            module: "spectra",
            reason: format!("bad sweep range [{min}, {max}] with {steps} steps"),
        });
    }
    let h = if steps > 1 { (max - min) / (steps - 1) as f64 } else { 0.0 };
    Ok((0..steps)
        .map(|k| min + h * k as f64)
        .filter(|s| (s + 1.0).abs() > POLE_GAP)
        .collect())
}

/// Spectral radius and cluster fractions over `grid`, with the same σ in
/// every one of `n_subdomains`. Points run in parallel; the result is in
/// grid order.
pub fn sigma_sweep<F>(grid: &[f64], n_subdomains: usize, epsilon: f64, builder: F) -> Result<Vec<SweepPoint>>
where
    F: Fn(&RelaxationConfig) -> Result<OperatorPencil> + Sync,
{
    grid.par_iter()
        .map(|&sigma| {
            let cfg = RelaxationConfig::uniform(C64::new(sigma, 0.0), n_subdomains)?;
            let pencil = builder(&cfg)?;
            let s = SpectrumResult::from_eigenvalues(pencil.eigenvalues()?, &cfg, epsilon)?;
            Ok(SweepPoint {
                sigma,
                rho: s.spectral_radius,
                n_eigs: s.eigenvalues.len(),
                fractions: s.cluster_report.fractions,
                remainder: s.cluster_report.remainder,
            })
        })
        .collect()
}

/// `sigma,rho,n_eigs,frac_cluster_1,...,frac_remainder`. Rows with fewer
/// clusters than the widest row are padded with empty fields.
pub fn write_sweep_csv<W: Write>(mut w: W, points: &[SweepPoint]) -> Result<()> {
    let width = points.iter().map(|p| p.fractions.len()).max().unwrap_or(0);
    write!(w, "sigma,rho,n_eigs")?;
    for k in 1..=width {
        write!(w, ",frac_cluster_{k}")?;
    }
    writeln!(w, ",frac_remainder")?;
    for p in points {
        write!(w, "{:.12e},{:.12e},{}", p.sigma, p.rho, p.n_eigs)?;
        for k in 0..width {
            match p.fractions.get(k) {
                Some(f) => write!(w, ",{f:.6}")?,
                None => write!(w, ",")?,
            }
        }
        writeln!(w, ",{:.6}", p.remainder)?;
    }
    Ok(())
}

/// `re,im` per eigenvalue.
pub fn write_eigenvalues_csv<W: Write>(mut w: W, eigs: &[C64]) -> Result<()> {
    writeln!(w, "re,im")?;
    for z in eigs {
        writeln!(w, "{:.12e},{:.12e}", z.re, z.im)?;
    }
    Ok(())
}
