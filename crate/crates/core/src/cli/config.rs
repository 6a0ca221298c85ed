use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Mode {
    #[serde(rename = "1d-2dom")]
    #[value(name = "1d-2dom")]
    OneD2Dom,
    #[serde(rename = "1d-3dom")]
    #[value(name = "1d-3dom")]
    OneD3Dom,
    #[serde(rename = "1d-bounded")]
    #[value(name = "1d-bounded")]
    OneDBounded,
    #[serde(rename = "schwarz-equiv")]
    #[value(name = "schwarz-equiv")]
    SchwarzEquiv,
    #[serde(rename = "spectrum-2d")]
    #[value(name = "spectrum-2d")]
    Spectrum2D,
    #[serde(rename = "spectrum-2d-3dom")]
    #[value(name = "spectrum-2d-3dom")]
    Spectrum2D3Dom,
    #[serde(rename = "sweep")]
    #[value(name = "sweep")]
    Sweep,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::OneD2Dom => "1d-2dom",
            Mode::OneD3Dom => "1d-3dom",
            Mode::OneDBounded => "1d-bounded",
            Mode::SchwarzEquiv => "schwarz-equiv",
            Mode::Spectrum2D => "spectrum-2d",
            Mode::Spectrum2D3Dom => "spectrum-2d-3dom",
            Mode::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Circle,
    Square,
    /// Two concentric circles, for three subdomains.
    Annulus,
    /// A mesh read from `mesh_file`.
    File,
}

/// Operator family used by `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum SweepModel {
    #[serde(rename = "1d-2dom")]
    #[value(name = "1d-2dom")]
    OneD2Dom,
    #[serde(rename = "1d-3dom")]
    #[value(name = "1d-3dom")]
    OneD3Dom,
    #[serde(rename = "1d-bounded")]
    #[value(name = "1d-bounded")]
    OneDBounded,
    #[serde(rename = "2d-2dom")]
    #[value(name = "2d-2dom")]
    TwoD2Dom,
    #[serde(rename = "2d-3dom")]
    #[value(name = "2d-3dom")]
    TwoD3Dom,
}

impl SweepModel {
    pub fn subdomains(self) -> usize {
        match self {
            SweepModel::OneD3Dom | SweepModel::TwoD3Dom => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl From<OneOrMany> for Vec<f64> {
    fn from(v: OneOrMany) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Keys accepted in a config file. Every key has a matching flag.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<Mode>,
    geometry: Option<Geometry>,
    n: Option<usize>,
    radius: Option<f64>,
    side: Option<f64>,
    inner_radius: Option<f64>,
    outer_radius: Option<f64>,
    mesh_file: Option<PathBuf>,
    gamma: Option<f64>,
    a: Option<OneOrMany>,
    sigma: Option<OneOrMany>,
    sigma_im: Option<OneOrMany>,
    alpha: Option<OneOrMany>,
    beta: Option<OneOrMany>,
    u0: Option<Vec<f64>>,
    iterations: Option<usize>,
    epsilon: Option<f64>,
    sigma_min: Option<f64>,
    sigma_max: Option<f64>,
    steps: Option<usize>,
    sweep_model: Option<SweepModel>,
    regular_order: Option<usize>,
    singular_order: Option<usize>,
    max_dim: Option<usize>,
    out: Option<PathBuf>,
}

/// Command line of the `mtf` binary. Flags override config-file values.
#[derive(Clone, Debug, Default, Parser)]
#[command(name = "mtf", version, about = "Multitrace formulations: 1D checks, 2D BEM spectra and sweeps")]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// Run mode; may instead come from the config file.
    #[arg(value_enum)]
    pub mode: Option<Mode>,
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub geometry: Option<Geometry>,
    /// Elements per closed curve.
    #[arg(long)]
    pub n: Option<usize>,
    /// Circle radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Square side length.
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long)]
    pub inner_radius: Option<f64>,
    #[arg(long)]
    pub outer_radius: Option<f64>,
    /// Plain-text mesh for `--geometry file`.
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
    /// Interface position on (0, 1) for the bounded modes.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Material constant(s) a, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    /// Relaxation parameter(s), comma separated; σ₀ first for three subdomains.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    /// Imaginary parts of the relaxation parameters.
    #[arg(long, value_delimiter = ',')]
    pub sigma_im: Option<Vec<f64>>,
    /// Dirichlet jump(s).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Neumann jump(s).
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    /// Initial Schwarz state u1,du1,u2,du2.
    #[arg(long, value_delimiter = ',')]
    pub u0: Option<Vec<f64>>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Cluster radius.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub sigma_min: Option<f64>,
    #[arg(long)]
    pub sigma_max: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub sweep_model: Option<SweepModel>,
    #[arg(long)]
    pub regular_order: Option<usize>,
    #[arg(long)]
    pub singular_order: Option<usize>,
    /// Largest matrix handed to the eigensolver.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Directory for report.json, CSV files and gnuplot scripts.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub geometry: Option<Geometry>,
    pub n: usize,
    pub radius: f64,
    pub side: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub mesh_file: Option<PathBuf>,
    pub gamma: f64,
    pub a: Vec<f64>,
    pub sigma: Vec<f64>,
    pub sigma_im: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub u0: Vec<f64>,
    pub iterations: usize,
    pub epsilon: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub steps: usize,
    pub sweep_model: SweepModel,
    pub regular_order: usize,
    pub singular_order: usize,
    pub max_dim: usize,
    pub out: Option<PathBuf>,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Repeats a single value `count` times; otherwise requires exactly `count`.
fn broadcast(name: &str, v: &[f64], count: usize) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; count]),
        k if k == count => Ok(v.to_vec()),
        k => Err(cfg_err(format!("`{name}` needs 1 or {count} values, got {k}"))),
    }
}

impl RunConfig {
    /// Subdomain count of the selected mode.
    pub fn subdomains(&self) -> usize {
        match self.mode {
            Mode::OneD3Dom | Mode::Spectrum2D3Dom => 3,
            Mode::Sweep => self.sweep_model.subdomains(),
            _ => 2,
        }
    }

    /// Whether the mode assembles boundary elements.
    pub fn uses_bem(&self) -> bool {
        match self.mode {
            Mode::Spectrum2D | Mode::Spectrum2D3Dom => true,
            Mode::Sweep => matches!(self.sweep_model, SweepModel::TwoD2Dom | SweepModel::TwoD3Dom),
            _ => false,
        }
    }

    fn validate(mut self) -> Result<Self> {
        let count = self.subdomains();
        if self.a.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(cfg_err(format!("material constants must be positive, got {:?}", self.a)));
        }
        let a_count = match self.mode {
            Mode::Spectrum2D | Mode::Spectrum2D3Dom => count,
            Mode::Sweep if self.uses_bem() => count,
            _ => 1,
        };
        self.a = broadcast("a", &self.a, a_count)?;
        if self.mode != Mode::Sweep {
            self.sigma = broadcast("sigma", &self.sigma, count)?;
            self.sigma_im = if self.sigma_im.is_empty() {
                vec![0.0; count]
            } else {
                broadcast("sigma_im", &self.sigma_im, count)?
            };
            for (k, (&re, &im)) in self.sigma.iter().zip(&self.sigma_im).enumerate() {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(cfg_err(format!("sigma[{k}] is not finite")));
                }
                if re == -1.0 && im == 0.0 {
                    return Err(cfg_err(format!(
                        "sigma[{k}] = -1 is not allowed: (1+sigma)Id - P must be invertible"
                    )));
                }
            }
        }
        let jumps = if self.mode == Mode::OneD3Dom { 2 } else { 1 };
        self.alpha = broadcast("alpha", &self.alpha, jumps)?;
        self.beta = broadcast("beta", &self.beta, jumps)?;
        if self.u0.len() != 4 {
            return Err(cfg_err(format!("`u0` needs 4 values, got {}", self.u0.len())));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(cfg_err(format!("`gamma` must lie in (0, 1), got {}", self.gamma)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(cfg_err(format!("`epsilon` must be non-negative, got {}", self.epsilon)));
        }
        if self.iterations == 0 {
            return Err(cfg_err("`iterations` must be at least 1"));
        }
        for (name, order) in [("regular_order", self.regular_order), ("singular_order", self.singular_order)] {
            if !(1..=40).contains(&order) {
                return Err(cfg_err(format!("`{name}` must be in 1..=40, got {order}")));
            }
        }
        if self.mode == Mode::Sweep {
            if !(self.sigma_min <= self.sigma_max) || self.steps == 0 {
                return Err(cfg_err(format!(
                    "bad sweep range [{}, {}] with {} steps",
                    self.sigma_min, self.sigma_max, self.steps
                )));
            }
        }
        self.check_geometry()?;
        Ok(self)
    }

    fn check_geometry(&mut self) -> Result<()> {
        let three = self.subdomains() == 3;
        if !self.uses_bem() {
            return Ok(());
        }
        if three {
            match self.geometry {
                None => self.geometry = Some(Geometry::Annulus),
                Some(Geometry::Annulus) => {}
                Some(g) => {
                    return Err(cfg_err(format!(
                        "three subdomains need `geometry = \"annulus\"`, got {g:?}"
                    )))
                }
            }
            if !(0.0 < self.inner_radius && self.inner_radius < self.outer_radius) {
                return Err(cfg_err("annulus needs 0 < inner_radius < outer_radius"));
            }
        } else {
            match self.geometry {
                None => {
                    return Err(cfg_err(format!(
                        "mode {} requires the field `geometry` (circle, square or file)",
                        self.mode.name()
                    )))
                }
                Some(Geometry::Annulus) => {
                    return Err(cfg_err("the annulus preset needs three subdomains"));
                }
                Some(Geometry::File) if self.mesh_file.is_none() => {
                    return Err(cfg_err("`geometry = \"file\"` requires the field `mesh_file`"));
                }
                Some(Geometry::Square) if self.n % 4 != 0 => {
                    return Err(cfg_err(format!("square needs `n` divisible by 4, got {}", self.n)));
                }
                _ => {}
            }
        }
        if self.n < 3 {
            return Err(cfg_err(format!("`n` must be at least 3, got {}", self.n)));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| cfg_err(format!("{}: {e}", path.display())))
}

/// Merges `args` over the file named by `--config` (if any) over defaults.
pub fn parse_config(args: &Args) -> Result<RunConfig> {
    let file = match &args.config {
        Some(p) => read_file(p)?,
        None => FileConfig::default(),
    };
    let pick_vec = |flag: &Option<Vec<f64>>, key: Option<OneOrMany>, default: &[f64]| -> Vec<f64> {
        flag.clone()
            .or_else(|| key.map(Vec::from))
            .unwrap_or_else(|| default.to_vec())
    };
    let mode = args
        .mode
        .or(file.mode)
        .ok_or_else(|| cfg_err("missing required field `mode`"))?;
    let cfg = RunConfig {
        mode,
        geometry: args.geometry.or(file.geometry),
        n: args.n.or(file.n).unwrap_or(128),
        radius: args.radius.or(file.radius).unwrap_or(1.0),
        side: args.side.or(file.side).unwrap_or(1.0),
        inner_radius: args.inner_radius.or(file.inner_radius).unwrap_or(0.5),
        outer_radius: args.outer_radius.or(file.outer_radius).unwrap_or(1.0),
        mesh_file: args.mesh_file.clone().or(file.mesh_file),
        gamma: args.gamma.or(file.gamma).unwrap_or(0.5),
        a: pick_vec(&args.a, file.a, &[1.0]),
        sigma: pick_vec(&args.sigma, file.sigma, &[0.1]),
        sigma_im: pick_vec(&args.sigma_im, file.sigma_im, &[]),
        alpha: pick_vec(&args.alpha, file.alpha, &[1.0]),
        beta: pick_vec(&args.beta, file.beta, &[0.5]),
        u0: args.u0.clone().or(file.u0).unwrap_or_else(|| vec![1.0, 0.5, -0.25, 0.75]),
        iterations: args.iterations.or(file.iterations).unwrap_or(8),
        epsilon: args.epsilon.or(file.epsilon).unwrap_or(crate::spectra::DEFAULT_EPSILON),
        sigma_min: args.sigma_min.or(file.sigma_min).unwrap_or(-0.95),
        sigma_max: args.sigma_max.or(file.sigma_max).unwrap_or(3.0),
        steps: args.steps.or(file.steps).unwrap_or(200),
        sweep_model: args.sweep_model.or(file.sweep_model).unwrap_or(SweepModel::OneD2Dom),
        regular_order: args.regular_order.or(file.regular_order).unwrap_or(8),
        singular_order: args.singular_order.or(file.singular_order).unwrap_or(10),
        max_dim: args.max_dim.or(file.max_dim).unwrap_or(crate::numkernel::MAX_EIG_DIM),
        out: args.out.clone().or(file.out),
    };
    cfg.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("mtf").chain(v.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let c = parse_config(&args(&["1d-2dom"])).unwrap();
        assert_eq!(c.a, vec![1.0]);
        assert_eq!(c.sigma, vec![0.1, 0.1]);
        assert_eq!(c.n, 128);
        assert_eq!(c.sigma_im, vec![0.0, 0.0]);
    }

    #[test]
    fn sweep_grid_flags_accept_negative_values() {
        let c = parse_config(&args(&["sweep", "--sigma-min", "-0.9", "--sigma-max", "2", "--steps", "100"]))
            .unwrap();
        assert_eq!((c.sigma_min, c.sigma_max, c.steps), (-0.9, 2.0, 100));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "mode = \"1d-2dom\"\na = 1.0\nsigma = [0.2, 0.3]\n").unwrap();
        let p = path.to_str().unwrap();
        let c = parse_config(&args(&["--config", p, "--a", "5"])).unwrap();
        assert_eq!(c.a, vec![5.0]);
        assert_eq!(c.sigma, vec![0.2, 0.3]);
        assert_eq!(c.mode, Mode::OneD2Dom);

        std::fs::write(&path, "mode = \"1d-2dom\"\nbogus = 1\n").unwrap();
        assert!(matches!(parse_config(&args(&["--config", p])), Err(Error::Config(_))));
    }

    #[test]
    fn errors_name_the_problem() {
        let e = parse_config(&args(&["spectrum-2d"])).unwrap_err().to_string();
        assert!(e.contains("`geometry`"), "{e}");
        let e = parse_config(&args(&["1d-2dom", "--sigma", "0.1,-1"])).unwrap_err().to_string();
        assert!(e.contains("invertible"), "{e}");
        assert!(parse_config(&args(&[])).unwrap_err().to_string().contains("`mode`"));
        assert!(parse_config(&args(&["1d-2dom", "--a", "-1"])).is_err());
        assert!(parse_config(&args(&["spectrum-2d", "--geometry", "square", "--n", "30"])).is_err());
        assert!(parse_config(&args(&["1d-bounded", "--gamma", "1.5"])).is_err());
        assert!(Args::try_parse_from(["mtf", "no-such-mode"]).is_err());
    }

    #[test]
    fn three_domain_defaults_to_annulus() {
        let c = parse_config(&args(&["spectrum-2d-3dom", "--sigma", "0.25"])).unwrap();
        assert_eq!(c.geometry, Some(Geometry::Annulus));
        assert_eq!(c.sigma.len(), 3);
        assert_eq!(c.a, vec![1.0; 3]);
    }
}
