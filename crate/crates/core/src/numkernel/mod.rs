//! Dense complex linear algebra used by every other module.
//!
//! Matrices are small to medium (at most a few thousand rows), so everything
//! is a plain row-major `Vec`. Real inputs are promoted to complex.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{
    eig_dense, eig_dense_vectors, eig_generalized, eig_generalized_vectors, multiset_distance,
    sort_eigenvalues, EigenResult, MAX_EIG_DIM,
};
pub use lu::{inverse, solve_dense, Lu};
pub use matrix::Matrix;
