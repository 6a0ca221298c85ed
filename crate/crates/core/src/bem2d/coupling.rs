//! The middle subdomain `Ω₀` between two disjoint closed curves `Γ₁`
//! (inner) and `Γ₂` (outer).
//!
//! Its projector, seen on `[U₀₁, U₀₂]` with `U₀ⱼ = (u, ∂ₙu)` on `Γⱼ` and the
//! normal pointing out of `Ω₀`, splits as `[[P̃₁, R₁₂], [R₂₁, P̃₂]]`.

use super::assembly::{assemble_operators, KernelParams, QuadratureOptions};
use super::calderon::{conjugate_by_flip, DiscreteCalderon, Side};
use super::mesh::{BoundaryMesh, Orientation};
use crate::numkernel::{Lu, Matrix};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CouplingBlocks {
    /// Galerkin projector of `Ω₀`, unknowns `[u₁, ∂ₙu₁, u₂, ∂ₙu₂]`.
    pub p0: Matrix,
    pub p_tilde1: Matrix,
    pub r12: Matrix,
    pub r21: Matrix,
    pub p_tilde2: Matrix,
    pub mass1: Matrix,
    pub mass2: Matrix,
    pub a: f64,
}

/// Relative residuals of the discrete coupling identities.
#[derive(Clone, Copy, Debug)]
pub struct CouplingResiduals {
    /// `‖R̂₂₁R̂₁₂‖ / (‖R̂₂₁‖‖R̂₁₂‖)`.
    pub r21_r12: f64,
    /// `‖R̂₁₂R̂₂₁‖ / (‖R̂₁₂‖‖R̂₂₁‖)`.
    pub r12_r21: f64,
    /// `‖𝑃₁XR̂₁₂ − XR̂₁₂‖ / ‖R̂₁₂‖`.
    pub p1_x_r12: f64,
    /// `max_j ‖X P̂̃ⱼ X + 𝑃̂ⱼ − Id‖ / ‖𝑃̂ⱼ‖`.
    pub complement: f64,
}

fn oriented(mesh: &BoundaryMesh, want: Orientation) -> Result<BoundaryMesh> {
    if mesh.n_curves() != 1 {
        return Err(Error::Mesh("each interface must be a single closed curve".into()));
    }
    Ok(if mesh.orientations[0] == want {
        mesh.clone()
    } else {
        mesh.reversed()
    })
}

impl CouplingBlocks {
    pub fn n1(&self) -> usize {
        self.mass1.rows()
    }

    pub fn n2(&self) -> usize {
        self.mass2.rows()
    }

    pub fn mass_block(&self) -> Matrix {
        Matrix::block_diag(&[&self.mass1, &self.mass1, &self.mass2, &self.mass2])
    }

    /// Residuals using the mass-normalised operators `M⁻¹B`. `p1` and `p2`
    /// are the projectors of `Ω₁` (inside `Γ₁`) and `Ω₂` (outside `Γ₂`).
    pub fn identity_residuals(
        &self,
        p1: &DiscreteCalderon,
        p2: &DiscreteCalderon,
    ) -> Result<CouplingResiduals> {
        let m1 = Lu::factor(&Matrix::block_diag(&[&self.mass1, &self.mass1]))?;
        let m2 = Lu::factor(&Matrix::block_diag(&[&self.mass2, &self.mass2]))?;
        let r12 = m1.solve(&self.r12)?;
        let r21 = m2.solve(&self.r21)?;
        let pt1 = m1.solve(&self.p_tilde1)?;
        let pt2 = m2.solve(&self.p_tilde2)?;
        let q1 = p1.operator()?;
        let q2 = p2.operator()?;
        let nr = |m: &Matrix| m.norm_fro();
        let x_r12 = Matrix::from_fn(r12.rows(), r12.cols(), |i, j| {
            if i < self.n1() {
                r12[(i, j)]
            } else {
                -r12[(i, j)]
            }
        });
        let comp = |pt: &Matrix, q: &Matrix| {
            let d = &(&conjugate_by_flip(pt) + q) - &Matrix::identity(q.rows());
            nr(&d) / nr(q)
        };
        Ok(CouplingResiduals {
            r21_r12: nr(&r21.matmul(&r12)) / (nr(&r21) * nr(&r12)),
            r12_r21: nr(&r12.matmul(&r21)) / (nr(&r12) * nr(&r21)),
            p1_x_r12: nr(&(&q1.matmul(&x_r12) - &x_r12)) / nr(&r12),
            complement: comp(&pt1, &q1).max(comp(&pt2, &q2)),
        })
    }
}

/// Assembles the projector of the region between `inner` and `outer` with
/// kernel parameter `params0`. Either curve may come in either orientation.
pub fn assemble_coupling(
    inner: &BoundaryMesh,
    outer: &BoundaryMesh,
    params0: KernelParams,
    quad: QuadratureOptions,
) -> Result<CouplingBlocks> {
    let g1 = oriented(inner, Orientation::Clockwise)?;
    let g2 = oriented(outer, Orientation::CounterClockwise)?;
    if !(g1.min_distance(&g2) > 0.0) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: "interface curves intersect or touch".into(),
        });
    }
    let union = g1.union(&g2);
    let ops = assemble_operators(&union, params0, quad)?;
    let p = DiscreteCalderon::from_operators(&ops, Side::Interior);
    let (n1, n2) = (g1.n_nodes(), g2.n_nodes());
    let n = n1 + n2;

    // [u(Γ₁), u(Γ₂), q(Γ₁), q(Γ₂)] → [u(Γ₁), q(Γ₁), u(Γ₂), q(Γ₂)]
    let perm: Vec<usize> = (0..n1)
        .chain(n..n + n1)
        .chain(n1..n)
        .chain(n + n1..2 * n)
        .collect();
    let p0 = Matrix::from_fn(2 * n, 2 * n, |i, j| p.p_num[(perm[i], perm[j])]);
    let mass1 = ops.mass.block(0, 0, n1, n1);
    let mass2 = ops.mass.block(n1, n1, n2, n2);
    Ok(CouplingBlocks {
        p_tilde1: p0.block(0, 0, 2 * n1, 2 * n1),
        r12: p0.block(0, 2 * n1, 2 * n1, 2 * n2),
        r21: p0.block(2 * n1, 0, 2 * n2, 2 * n1),
        p_tilde2: p0.block(2 * n1, 2 * n1, 2 * n2, 2 * n2),
        p0,
        mass1,
        mass2,
        a: params0.a,
    })
}

#[cfg(test)]
mod tests {
    use super::super::mesh::{make_circle, make_three_domain, ThreeDomainPreset};
    use super::*;

    #[test]
    fn blocks_and_identities() {
        let (g1, g2) = make_three_domain(&ThreeDomainPreset::annulus(24)).unwrap();
        let params = KernelParams::new(1.0).unwrap();
        let quad = QuadratureOptions::default();
        let c = assemble_coupling(&g1, &g2, params, quad).unwrap();
        assert_eq!(c.p0.rows(), 96);
        // diagonal blocks are the complements of the neighbouring projectors
        let p1 = super::super::calderon::assemble_calderon_2d(&g1, params, Side::Interior, quad).unwrap();
        let p2 = super::super::calderon::assemble_calderon_2d(&g2, params, Side::Exterior, quad).unwrap();
        let id1 = p1.mass_block();
        let lhs = &conjugate_by_flip(&c.p_tilde1) + &p1.p_num;
        assert!((&lhs - &id1).max_abs() < 1e-13);
        let res = c.identity_residuals(&p1, &p2).unwrap();
        assert!(res.complement < 1e-12);
        assert!(res.r21_r12 < 0.2 && res.r12_r21 < 0.2, "{res:?}");
    }

    #[test]
    fn rejects_intersecting_curves() {
        let g1 = make_circle(16, 1.0, [0.0, 0.0]).unwrap();
        let g2 = make_circle(16, 1.0, [0.5, 0.0]).unwrap();
        assert!(assemble_coupling(&g1, &g2, KernelParams::new(1.0).unwrap(), QuadratureOptions::default()).is_err());
    }
}
