use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the crate. Messages carry the name of the
/// module that produced them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("numkernel: matrix is singular to working precision (pivot magnitude {pivot:.3e} in column {column})")]
    Singular { pivot: f64, column: usize },

    #[error("numkernel: QR iteration did not converge after {iterations} sweeps ({deflated} of {dim} eigenvalues deflated)")]
    NoConvergence {
        iterations: usize,
        deflated: usize,
        dim: usize,
    },

    #[error("numkernel: dimension mismatch: {0}")]
    Dimension(String),

    #[error("numkernel: matrix contains non-finite entries")]
    NonFinite,

    #[error("{module}: material constant a must be positive, got {value}")]
    NonPositiveMaterial { module: &'static str, value: f64 },

    #[error("{module}: relaxation parameter sigma[{index}] = -1 makes (1+sigma)Id - P non-invertible")]
    SigmaMinusOne { module: &'static str, index: usize },

    #[error("{module}: invalid parameter: {reason}")]
    Parameter { module: &'static str, reason: String },

    #[error("mtf1d: evaluation point x = {0} lies on an interface")]
    OnInterface(f64),

    #[error("{module}: invalid geometry: {reason}")]
    Geometry { module: &'static str, reason: String },

    #[error("bem2d: mesh error: {0}")]
    Mesh(String),

    #[error("bem2d: quadrature failure: {0}")]
    Quadrature(String),

    #[error("cli: config error: {0}")]
    Config(String),

    #[error("cli: i/o error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the `mtf` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
