//! Galerkin matrices of the Calderón projector.
//!
//! For the domain the mesh normals point out of,
//! `𝑃 = [[½ − K, V], [W, ½ + K']]` acting on `(u, ∂ₙu)`. Its Galerkin form is
//! `P_num = [[½M − K, V], [W, ½M + Kᵀ]]` and `M⁻¹P_num` approximates `𝑃` on
//! nodal coefficients. The complementary domain has the normals reversed,
//! which flips the signs of `K` and `K'` and gives `X 𝑃_ext X = Id − 𝑃_int`
//! exactly at the discrete level.

use super::assembly::{assemble_operators, BemOperatorSet, KernelParams, QuadratureOptions};
use super::mesh::BoundaryMesh;
use crate::numkernel::{Lu, Matrix};
use crate::{Error, Result, C64};

/// Which side of the mesh the projector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The region the element normals point out of.
    Interior,
    /// The region the element normals point into.
    Exterior,
}

#[derive(Clone, Debug)]
pub struct DiscreteCalderon {
    /// `2n × 2n`, unknowns ordered `[u at nodes, ∂ₙu at nodes]`.
    pub p_num: Matrix,
    /// `n × n` P1 mass matrix.
    pub mass: Matrix,
    pub side: Side,
    pub a: f64,
}

/// `diag(Id, −Id)` on `[u, ∂ₙu]` coefficients.
pub fn flip_matrix(n_nodes: usize) -> Matrix {
    let mut x = Matrix::identity(2 * n_nodes);
    for i in n_nodes..2 * n_nodes {
        x[(i, i)] = -x[(i, i)];
    }
    x
}

/// Row/column sign flip `X A X` for `X = diag(Id, −Id)`.
pub fn conjugate_by_flip(a: &Matrix) -> Matrix {
    let n = a.rows() / 2;
    Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        let s = if (i < n) == (j < n) { 1.0 } else { -1.0 };
        a[(i, j)] * s
    })
}

/// Block norms of the four `n × n` blocks, and their maximum relative to the
/// matching block of `reference`.
fn blockwise_relative(d: &Matrix, reference: &Matrix) -> f64 {
    let n = d.rows() / 2;
    let mut worst: f64 = 0.0;
    for bi in 0..2 {
        for bj in 0..2 {
            let num = d.block(bi * n, bj * n, n, n).norm_fro();
            let den = reference.block(bi * n, bj * n, n, n).norm_fro();
            if den > 0.0 {
                worst = worst.max(num / den);
            }
        }
    }
    worst
}

impl DiscreteCalderon {
    pub fn from_operators(ops: &BemOperatorSet, side: Side) -> Self {
        let n = ops.n_nodes();
        let half_m = ops.mass.scale_real(0.5);
        let (k, k_adj) = match side {
            Side::Interior => (ops.k.clone(), ops.k_adj.clone()),
            Side::Exterior => (-&ops.k, -&ops.k_adj),
        };
        let mut p = Matrix::zeros(2 * n, 2 * n);
        p.set_block(0, 0, &(&half_m - &k));
        p.set_block(0, n, &ops.v);
        p.set_block(n, 0, &ops.w);
        p.set_block(n, n, &(&half_m + &k_adj));
        Self {
            p_num: p,
            mass: ops.mass.clone(),
            side,
            a: ops.a,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.mass.rows()
    }

    pub fn dim(&self) -> usize {
        self.p_num.rows()
    }

    /// `blockdiag(M, M)`.
    pub fn mass_block(&self) -> Matrix {
        Matrix::block_diag(&[&self.mass, &self.mass])
    }

    /// `M⁻¹ P_num` on nodal coefficients.
    pub fn operator(&self) -> Result<Matrix> {
        Lu::factor(&self.mass_block())?.solve(&self.p_num)
    }

    /// Residual of `Q² = Q` for `Q = M⁻¹P_num`: the largest Frobenius norm of
    /// an `n × n` block of `Q² − Q` relative to the same block of `Q`.
    pub fn projector_residual(&self) -> Result<f64> {
        let q = self.operator()?;
        let d = &q.matmul(&q) - &q;
        Ok(blockwise_relative(&d, &q))
    }

    /// `max_k ‖(Q² − Q)t_k‖ / ‖t_k‖` over the given coefficient vectors,
    /// `Q = M⁻¹P_num`. Unlike the matrix residual this only sees the
    /// components the mesh resolves.
    pub fn projector_residual_on(&self, traces: &[Vec<C64>]) -> Result<f64> {
        let q = self.operator()?;
        let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut worst: f64 = 0.0;
        for t in traces {
            if t.len() != q.cols() {
                return Err(Error::Dimension(format!(
                    "trace vector has length {}, operator has dimension {}",
                    t.len(),
                    q.cols()
                )));
            }
            let qt = q.mul_vec(t);
            let qqt = q.mul_vec(&qt);
            let d: Vec<C64> = qqt.iter().zip(&qt).map(|(a, b)| a - b).collect();
            worst = worst.max(norm(&d) / norm(t));
        }
        Ok(worst)
    }

    /// Residual of `X 𝑃_other X + 𝑃_self = Id` in the same block-relative
    /// norm, on the operators `M⁻¹P_num`.
    pub fn complement_residual(&self, other: &DiscreteCalderon) -> Result<f64> {
        let q1 = self.operator()?;
        let q2 = other.operator()?;
        let d = &(&conjugate_by_flip(&q2) + &q1) - &Matrix::identity(q1.rows());
        Ok(blockwise_relative(&d, &q1))
    }
}

/// Assembles the operators for `params.a` and arranges them for `side`.
pub fn assemble_calderon_2d(
    mesh: &BoundaryMesh,
    params: KernelParams,
    side: Side,
    quad: QuadratureOptions,
) -> Result<DiscreteCalderon> {
    let ops = assemble_operators(mesh, params, quad)?;
    Ok(DiscreteCalderon::from_operators(&ops, side))
}

#[cfg(test)]
mod tests {
    use super::super::assembly::kernel_2d;
    use super::super::mesh::make_circle;
    use super::*;

    fn circle_ops(n: usize) -> (BoundaryMesh, BemOperatorSet) {
        let mesh = make_circle(n, 1.0, [0.0, 0.0]).unwrap();
        let ops = assemble_operators(&mesh, KernelParams::new(1.0).unwrap(), QuadratureOptions::default())
            .unwrap();
        (mesh, ops)
    }

    #[test]
    fn exterior_is_exact_complement() {
        let (_, ops) = circle_ops(24);
        let p1 = DiscreteCalderon::from_operators(&ops, Side::Interior);
        let p2 = DiscreteCalderon::from_operators(&ops, Side::Exterior);
        let lhs = &conjugate_by_flip(&p2.p_num) + &p1.p_num;
        let id = p1.mass_block();
        assert!((&lhs - &id).max_abs() < 1e-15);
    }

    #[test]
    fn defect_on_resolved_modes_shrinks() {
        // the matrix residual levels off because modes near the mesh scale
        // never become idempotent; fixed low modes do
        let mut on_modes = Vec::new();
        let mut matrix = Vec::new();
        for n in [32, 64] {
            let (mesh, ops) = circle_ops(n);
            let p = DiscreteCalderon::from_operators(&ops, Side::Interior);
            let modes: Vec<Vec<C64>> = (0..2)
                .flat_map(|comp| {
                    let mesh = &mesh;
                    (1..=3).map(move |k| {
                        let mut v = vec![C64::new(0.0, 0.0); 2 * n];
                        for (j, x) in mesh.nodes.iter().enumerate() {
                            v[comp * n + j] = C64::from_polar(1.0, k as f64 * x[1].atan2(x[0]));
                        }
                        v
                    })
                })
                .collect();
            on_modes.push(p.projector_residual_on(&modes).unwrap());
            matrix.push(p.projector_residual().unwrap());
        }
        assert!(on_modes[1] < on_modes[0] / 4.0, "{on_modes:?}");
        assert!(matrix[1] > matrix[0] / 1.5, "{matrix:?}");
        assert!(DiscreteCalderon::from_operators(&circle_ops(8).1, Side::Interior)
            .projector_residual_on(&[vec![C64::new(1.0, 0.0); 3]])
            .is_err());
    }

    #[test]
    fn reproduces_traces_of_a_kernel_solution() {
        // u = 𝒢(· − x₀) with x₀ outside the unit disk
        let x0 = [2.0, 0.5];
        let mut errs = Vec::new();
        for n in [32, 64] {
            let (mesh, ops) = circle_ops(n);
            let p = DiscreteCalderon::from_operators(&ops, Side::Interior);
            let mut t = Vec::with_capacity(2 * n);
            let mut dn = Vec::with_capacity(n);
            for x in &mesh.nodes {
                let d = [x[0] - x0[0], x[1] - x0[1]];
                let r = d[0].hypot(d[1]);
                t.push(C64::new(kernel_2d(1.0, r).unwrap(), 0.0));
                // outward normal of the polygon at a vertex: radial direction
                let nrm = [x[0], x[1]];
                let g = -super::super::bessel::bessel_k1(r) / (2.0 * std::f64::consts::PI);
                dn.push(C64::new(g * (nrm[0] * d[0] + nrm[1] * d[1]) / r, 0.0));
            }
            t.extend(dn);
            let pt = p.operator().unwrap().mul_vec(&t);
            let err = pt.iter().zip(&t).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
            errs.push(err / scale);
        }
        assert!(errs[1] < errs[0], "{errs:?}");
        assert!(errs[1] < 0.05, "{errs:?}");
    }
}
