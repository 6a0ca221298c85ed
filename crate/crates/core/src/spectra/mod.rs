//! Jacobi iteration operators of the multitrace system, their spectra, and
//! how closely those spectra gather at `±√(σⱼ/(1+σⱼ))`.

pub mod cluster;
pub mod pencil;
pub mod sweep;

pub use cluster::{cluster_report, spectrum, theoretical_points, ClusterReport, SpectrumResult, DEFAULT_EPSILON};
pub use pencil::{
    jacobi_1d_2dom, jacobi_1d_3dom, jacobi_1d_3dom_full_middle, jacobi_1d_bounded, jacobi_2d_2dom, jacobi_2d_3dom,
    jacobi_pencil_2dom, jacobi_pencil_3dom, OperatorPencil, RelaxationConfig,
};
pub use sweep::{sigma_grid, sigma_sweep, write_eigenvalues_csv, write_sweep_csv, SweepPoint};
