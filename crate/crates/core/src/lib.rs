//! Local multitrace formulations for the screened Laplace equation `-Δu + a²u = 0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numkernel`] dense complex linear algebra: LU solves, Hessenberg/QR
//!   eigenvalues and a generalized (pencil) eigenvalue driver.
//! * [`mtf1d`] the closed-form one-dimensional model on the real line:
//!   Green's function, representation formulas, Calderón projectors and the
//!   block Jacobi iteration of the multitrace system for two and three
//!   subdomains.
//! * [`bounded`] the same model on `(0, 1)` split at `γ`: closed-form
//!   projectors, Dirichlet-to-Neumann maps and the optimal Schwarz iteration.
//! * [`bem2d`] a Galerkin P1 boundary element discretization of the
//!   Calderón projector on closed polygons in the plane.
//! * [`spectra`] Jacobi iteration pencils built from analytic or discrete
//!   projectors, spectral radii, sweeps over the relaxation parameter and
//!   eigenvalue cluster diagnostics.
//! * [`cli`] configuration, run driver and artifact writers behind the `mtf`
//!   binary.
//!
//! Complex scalars are used throughout because relaxation parameters may be
//! complex.

pub mod bem2d;
pub mod bounded;
pub mod cli;
mod error;
pub mod mtf1d;
pub mod numkernel;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use numkernel::Matrix;
