//! Galerkin boundary elements for `−Δu + a²u = 0` in the plane with
//! continuous piecewise-linear functions for both trace components.

pub mod assembly;
pub mod bessel;
pub mod calderon;
pub mod coupling;
pub mod mesh;
pub mod quadrature;

pub use assembly::{
    assemble_operators, kernel_2d, kernel_normal_derivative, BemOperatorSet, KernelParams,
    QuadratureOptions,
};
pub use calderon::{assemble_calderon_2d, conjugate_by_flip, flip_matrix, DiscreteCalderon, Side};
pub use coupling::{assemble_coupling, CouplingBlocks, CouplingResiduals};
pub use mesh::{
    make_circle, make_square, make_three_domain, BoundaryMesh, Element, Orientation, Point,
    ThreeDomainPreset,
};
