use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{Geometry, Mode, RunConfig, SweepModel};
use super::output::{self, Artifact};
use crate::bem2d::{
    assemble_calderon_2d, assemble_coupling, assemble_operators, make_circle, make_square,
    make_three_domain, BoundaryMesh, CouplingBlocks, DiscreteCalderon, KernelParams, Orientation,
    QuadratureOptions, Side, ThreeDomainPreset,
};
use crate::bounded::{
    calderon_bounded, calderon_from_dtn, dtn_operators, equivalence_check, jacobi_operator_bounded,
    transmission_solve_bounded, BoundedGeometry, SchwarzState,
};
use crate::mtf1d::{
    assemble_mtf_2dom, assemble_mtf_3dom, block_jacobi_run, exact_traces_2dom, exact_traces_3dom,
    jacobi_operator_2dom, jacobi_operator_3dom, stack_traces, IterationHistory, JacobiOperator1D,
    JumpData,
};
use crate::numkernel::sort_eigenvalues;
use crate::spectra::{
    jacobi_1d_2dom, jacobi_1d_3dom, jacobi_1d_bounded, jacobi_2d_2dom, jacobi_2d_3dom, sigma_grid,
    sigma_sweep, OperatorPencil, RelaxationConfig, SpectrumResult,
};
use crate::{Error, Result, C64};

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// First 16 hex digits of the SHA-256 of the canonical config JSON.
    pub run_id: String,
    pub mode: String,
    pub config: RunConfig,
    pub results: Value,
    pub timings: Vec<Timing>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
}

struct Clock {
    timings: Vec<Timing>,
}

impl Clock {
    fn phase<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f()?;
        self.timings.push(Timing {
            phase: name.to_string(),
            seconds: t.elapsed().as_secs_f64(),
        });
        Ok(out)
    }
}

pub fn run_id(cfg: &RunConfig) -> String {
    let canon = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(&Sha256::digest(canon.as_bytes())[..8])
}

fn sigmas(cfg: &RunConfig) -> Vec<C64> {
    cfg.sigma
        .iter()
        .zip(&cfg.sigma_im)
        .map(|(&re, &im)| C64::new(re, im))
        .collect()
}

fn relaxation(cfg: &RunConfig) -> Result<RelaxationConfig> {
    RelaxationConfig::new(sigmas(cfg))
}

fn quad(cfg: &RunConfig) -> QuadratureOptions {
    QuadratureOptions {
        regular_order: cfg.regular_order,
        singular_order: cfg.singular_order,
    }
}

fn check_dim(cfg: &RunConfig, dim: usize) -> Result<()> {
    if dim > cfg.max_dim {
        return Err(Error::Config(format!(
            "operator dimension {dim} exceeds max_dim = {}; lower `n` or raise `max_dim`",
            cfg.max_dim
        )));
    }
    Ok(())
}

fn spectrum_of(cfg: &RunConfig, pencil: &OperatorPencil, rc: &RelaxationConfig) -> Result<SpectrumResult> {
    check_dim(cfg, pencil.dim())?;
    let mut eigs = pencil.eigenvalues()?;
    sort_eigenvalues(&mut eigs);
    SpectrumResult::from_eigenvalues(eigs, rc, cfg.epsilon)
}

fn spectrum_json(s: &SpectrumResult) -> Value {
    json!({
        "spectral_radius": s.spectral_radius,
        "theoretical_radius": s.theoretical_points.iter().map(|z| z.norm()).fold(0.0, f64::max),
        "n_eigs": s.eigenvalues.len(),
        "theoretical_points": s.theoretical_points,
        "cluster_report": s.cluster_report,
    })
}

fn spectrum_artifacts(s: &SpectrumResult) -> Result<Vec<Artifact>> {
    Ok(vec![
        Artifact::csv_eigenvalues("eigenvalues.csv", &s.eigenvalues)?,
        Artifact::csv_eigenvalues("theory.csv", &s.theoretical_points)?,
        Artifact::text("spectrum.gp", output::SPECTRUM_GP),
    ])
}

fn history_json(h: &IterationHistory, exact: &[C64]) -> Value {
    let fp_err = h
        .fixed_point
        .iter()
        .zip(exact)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    json!({
        "errors": h.errors,
        "steps_to_1e-12": h.steps_to_tolerance(1e-12),
        "fixed_point_vs_exact_traces": fp_err,
    })
}

/// Shared part of the closed-form 1D modes.
fn iterate_1d(
    cfg: &RunConfig,
    clock: &mut Clock,
    op: &JacobiOperator1D,
    exact: &[C64],
    system_residual: f64,
) -> Result<(Value, Vec<Artifact>)> {
    let rc = relaxation(cfg)?;
    let zero = vec![C64::new(0.0, 0.0); op.dim()];
    let h = clock.phase("iteration", || block_jacobi_run(op, &zero, cfg.iterations))?;
    let s = clock.phase("eigen", || spectrum_of(cfg, &OperatorPencil::explicit(op.matrix.clone()), &rc))?;
    let results = json!({
        "spectrum": spectrum_json(&s),
        "eigenvalues": s.eigenvalues,
        "nilpotent_limit": op.is_nilpotent_limit(),
        "exact_traces": exact,
        "exact_traces_system_residual": system_residual,
        "history": history_json(&h, exact),
    });
    let mut art = spectrum_artifacts(&s)?;
    art.push(Artifact::csv_history("history.csv", &h.errors)?);
    art.push(Artifact::text("history.gp", output::HISTORY_GP));
    Ok((results, art))
}

fn run_1d_2dom(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let s = sigmas(cfg);
    let a = cfg.a[0];
    let jump = JumpData::at_origin(cfg.alpha[0], cfg.beta[0]);
    let op = jacobi_operator_2dom(a, s[0], s[1], jump)?;
    let (u1, u2) = exact_traces_2dom(a, jump)?;
    let exact = stack_traces(&[u1, u2]);
    let res = assemble_mtf_2dom(a, s[0], s[1], jump)?.residual(&exact);
    iterate_1d(cfg, clock, &op, &exact, res)
}

fn run_1d_3dom(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let s = sigmas(cfg);
    let a = cfg.a[0];
    let left = JumpData::new(cfg.alpha[0], cfg.beta[0], -1.0);
    let right = JumpData::new(cfg.alpha[1], cfg.beta[1], 1.0);
    let sig = [s[0], s[1], s[2]];
    let op = jacobi_operator_3dom(a, sig, left, right)?;
    let exact = stack_traces(&exact_traces_3dom(a, left, right)?);
    let res = assemble_mtf_3dom(a, sig, left, right)?.residual(&exact);
    iterate_1d(cfg, clock, &op, &exact, res)
}

fn run_1d_bounded(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let s = sigmas(cfg);
    let geom = BoundedGeometry::new(cfg.gamma, cfg.a[0])?;
    let jump = JumpData::new(cfg.alpha[0], cfg.beta[0], cfg.gamma);
    let op = jacobi_operator_bounded(geom, s[0], s[1], jump)?;
    let sol = transmission_solve_bounded(geom, jump);
    let (um, dm) = sol.interface_limit(-1.0);
    let (up, dp) = sol.interface_limit(1.0);
    let exact: Vec<C64> = [um, dm, up, -dp].iter().map(|&x| C64::new(x, 0.0)).collect();
    let sys = crate::bounded::assemble_mtf_bounded(geom, s[0], s[1], jump)?;
    let (mut results, art) = iterate_1d(cfg, clock, &op, &exact, sys.residual(&exact))?;
    let (p1, p2) = calderon_bounded(geom);
    let (q1, q2) = calderon_from_dtn(dtn_operators(geom), geom.a);
    results["projector_defects"] = json!([p1.projector_defect(), p2.projector_defect()]);
    results["dtn_reconstruction_deviation"] =
        json!((&p1.matrix - &q1.matrix).max_abs().max((&p2.matrix - &q2.matrix).max_abs()));
    Ok((results, art))
}

fn run_schwarz(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let geom = BoundedGeometry::new(cfg.gamma, cfg.a[0])?;
    let u0 = SchwarzState::new(cfg.u0[0], cfg.u0[1], cfg.u0[2], cfg.u0[3]);
    let control_sigma = if cfg.sigma[0] != 0.0 { cfg.sigma[0] } else { 0.3 };
    let (eq, control) = clock.phase("iteration", || {
        Ok((
            equivalence_check(geom, u0, cfg.iterations, 0.0)?,
            equivalence_check(geom, u0, cfg.iterations, control_sigma)?,
        ))
    })?;
    let results = json!({
        "deviations": eq.deviations,
        "max_deviation": eq.max_deviation,
        "schwarz_zero_step": eq.schwarz_zero_step,
        "jacobi_zero_step": eq.jacobi_zero_step,
        "zero_tolerance": eq.zero_tol,
        "control": {
            "sigma": control_sigma,
            "deviations": control.deviations,
            "max_deviation": control.max_deviation,
        },
    });
    let art = vec![Artifact::csv_columns(
        "schwarz.csv",
        &["step", "deviation", "control_deviation"],
        &eq.deviations
            .iter()
            .zip(&control.deviations)
            .enumerate()
            .map(|(k, (d, c))| vec![k as f64, *d, *c])
            .collect::<Vec<_>>(),
    )?];
    Ok((results, art))
}

fn load_mesh(cfg: &RunConfig) -> Result<BoundaryMesh> {
    match cfg.geometry {
        Some(Geometry::Circle) => make_circle(cfg.n, cfg.radius, [0.0, 0.0]),
        Some(Geometry::Square) => make_square(cfg.n / 4, cfg.side, [0.0, 0.0]),
        Some(Geometry::File) => {
            let path = cfg.mesh_file.as_deref().expect("validated");
            let mesh = BoundaryMesh::read(path)?;
            if mesh.n_curves() != 1 {
                return Err(Error::Mesh(format!(
                    "{}: expected one closed curve, found {}",
                    path.display(),
                    mesh.n_curves()
                )));
            }
            Ok(if mesh.orientations[0] == Orientation::CounterClockwise {
                mesh
            } else {
                mesh.reversed()
            })
        }
        _ => unreachable!("validated"),
    }
}

/// Projectors of the inside (`a₁`) and outside (`a₂`) of a closed curve.
/// Equal constants share one assembly.
pub(crate) fn two_domain_projectors(
    mesh: &BoundaryMesh,
    a1: f64,
    a2: f64,
    q: QuadratureOptions,
) -> Result<(DiscreteCalderon, DiscreteCalderon)> {
    if a1 == a2 {
        let ops = assemble_operators(mesh, KernelParams::new(a1)?, q)?;
        Ok((
            DiscreteCalderon::from_operators(&ops, Side::Interior),
            DiscreteCalderon::from_operators(&ops, Side::Exterior),
        ))
    } else {
        Ok((
            assemble_calderon_2d(mesh, KernelParams::new(a1)?, Side::Interior, q)?,
            assemble_calderon_2d(mesh, KernelParams::new(a2)?, Side::Exterior, q)?,
        ))
    }
}

/// `(𝑃₁, 𝑃₂, coupling)` for the annulus preset with `a = [a₀, a₁, a₂]`.
pub(crate) fn three_domain_blocks(
    cfg: &RunConfig,
    a: &[f64],
) -> Result<(DiscreteCalderon, DiscreteCalderon, CouplingBlocks)> {
    let preset = ThreeDomainPreset {
        inner_radius: cfg.inner_radius,
        outer_radius: cfg.outer_radius,
        n_inner: cfg.n,
        n_outer: cfg.n,
        center: [0.0, 0.0],
    };
    let (g1, g2) = make_three_domain(&preset)?;
    let q = quad(cfg);
    let c = assemble_coupling(&g1, &g2, KernelParams::new(a[0])?, q)?;
    let p1 = assemble_calderon_2d(&g1, KernelParams::new(a[1])?, Side::Interior, q)?;
    let p2 = assemble_calderon_2d(&g2, KernelParams::new(a[2])?, Side::Exterior, q)?;
    Ok((p1, p2, c))
}

fn run_spectrum_2d(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let rc = relaxation(cfg)?;
    let mesh = load_mesh(cfg)?;
    let (p1, p2) = clock.phase("assembly", || two_domain_projectors(&mesh, cfg.a[0], cfg.a[1], quad(cfg)))?;
    let residuals = clock.phase("residuals", || {
        Ok(json!({
            "projector_1": p1.projector_residual()?,
            "projector_2": p2.projector_residual()?,
            "complement": p1.complement_residual(&p2)?,
        }))
    })?;
    let pencil = jacobi_2d_2dom(&p1, &p2, &rc)?;
    let s = clock.phase("eigen", || spectrum_of(cfg, &pencil, &rc))?;
    let results = json!({
        "n_nodes": mesh.n_nodes(),
        "mesh_size": mesh.mesh_size(),
        "identity_residuals": residuals,
        "spectrum": spectrum_json(&s),
    });
    let mut art = spectrum_artifacts(&s)?;
    art.push(Artifact::text("mesh.txt", &mesh.to_text()));
    Ok((results, art))
}

fn run_spectrum_2d_3dom(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let rc = relaxation(cfg)?;
    let (p1, p2, c) = clock.phase("assembly", || three_domain_blocks(cfg, &cfg.a))?;
    let res = clock.phase("residuals", || c.identity_residuals(&p1, &p2))?;
    let pencil = jacobi_2d_3dom(&p1, &p2, &c, &rc)?;
    let s = clock.phase("eigen", || spectrum_of(cfg, &pencil, &rc))?;
    let results = json!({
        "n_nodes": [c.n1(), c.n2()],
        "identity_residuals": {
            "r21_r12": res.r21_r12,
            "r12_r21": res.r12_r21,
            "p1_x_r12": res.p1_x_r12,
            "complement": res.complement,
        },
        "spectrum": spectrum_json(&s),
    });
    Ok((results, spectrum_artifacts(&s)?))
}

fn run_sweep(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Vec<Artifact>)> {
    let grid = sigma_grid(cfg.sigma_min, cfg.sigma_max, cfg.steps)?;
    let k = cfg.sweep_model.subdomains();
    let eps = cfg.epsilon;
    let points = match cfg.sweep_model {
        SweepModel::OneD2Dom => clock.phase("sweep", || sigma_sweep(&grid, k, eps, |rc| jacobi_1d_2dom(cfg.a[0], rc)))?,
        SweepModel::OneD3Dom => clock.phase("sweep", || sigma_sweep(&grid, k, eps, |rc| jacobi_1d_3dom(cfg.a[0], rc)))?,
        SweepModel::OneDBounded => {
            let geom = BoundedGeometry::new(cfg.gamma, cfg.a[0])?;
            clock.phase("sweep", || sigma_sweep(&grid, k, eps, |rc| jacobi_1d_bounded(geom, rc)))?
        }
        SweepModel::TwoD2Dom => {
            let mesh = load_mesh(cfg)?;
            let (p1, p2) =
                clock.phase("assembly", || two_domain_projectors(&mesh, cfg.a[0], cfg.a[1], quad(cfg)))?;
            check_dim(cfg, p1.dim() + p2.dim())?;
            clock.phase("sweep", || sigma_sweep(&grid, k, eps, |rc| jacobi_2d_2dom(&p1, &p2, rc)))?
        }
        SweepModel::TwoD3Dom => {
            let (p1, p2, c) = clock.phase("assembly", || three_domain_blocks(cfg, &cfg.a))?;
            check_dim(cfg, p1.dim() + c.p0.rows() + p2.dim())?;
            clock.phase("sweep", || sigma_sweep(&grid, k, eps, |rc| jacobi_2d_3dom(&p1, &p2, &c, rc)))?
        }
    };
    let worst = points
        .iter()
        .map(|p| (p.rho - (p.sigma / (1.0 + p.sigma)).abs().sqrt()).abs())
        .fold(0.0, f64::max);
    let results = json!({
        "n_points": points.len(),
        "max_deviation_from_sqrt_law": worst,
        "points": points,
    });
    let art = vec![
        Artifact::csv_sweep("sweep.csv", &points)?,
        Artifact::text("sweep.gp", output::SWEEP_GP),
    ];
    Ok((results, art))
}

/// Runs the configured mode. Nothing is written to disk.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let mut clock = Clock { timings: Vec::new() };
    let start = Instant::now();
    let (results, artifacts) = match cfg.mode {
        Mode::OneD2Dom => run_1d_2dom(cfg, &mut clock)?,
        Mode::OneD3Dom => run_1d_3dom(cfg, &mut clock)?,
        Mode::OneDBounded => run_1d_bounded(cfg, &mut clock)?,
        Mode::SchwarzEquiv => run_schwarz(cfg, &mut clock)?,
        Mode::Spectrum2D => run_spectrum_2d(cfg, &mut clock)?,
        Mode::Spectrum2D3Dom => run_spectrum_2d_3dom(cfg, &mut clock)?,
        Mode::Sweep => run_sweep(cfg, &mut clock)?,
    };
    clock.timings.push(Timing {
        phase: "total".into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(RunOutput {
        report: RunReport {
            run_id: run_id(cfg),
            mode: cfg.mode.name().to_string(),
            config: cfg.clone(),
            results,
            timings: clock.timings,
        },
        artifacts,
    })
}

/// Writes `report.json` and the artifacts into `dir`; returns the paths.
pub fn write_outputs(dir: &Path, out: &RunOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(out.artifacts.len() + 1);
    let report = dir.join("report.json");
    let text = serde_json::to_string_pretty(&out.report)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    std::fs::write(&report, text + "\n")?;
    written.push(report);
    for a in &out.artifacts {
        let p = dir.join(&a.name);
        std::fs::write(&p, &a.contents)?;
        written.push(p);
    }
    Ok(written)
}
