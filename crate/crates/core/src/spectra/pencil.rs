//! Block Jacobi operators as matrix pencils `A v = λ B v`.
//!
//! With Galerkin blocks `P_num` and mass `M`, the discrete projector is
//! `M⁻¹P_num`, so `((1+σ)Id − 𝑃)⁻¹ σX` becomes the pencil
//! `(σ M X, (1+σ)M − P_num)` and no mass matrix is inverted. A row with
//! `σ = 0` switches to the simplified form `((σM + P_num)X / (1+σ), M)`,
//! which stays well defined in that limit.

use crate::bem2d::{CouplingBlocks, DiscreteCalderon};
use crate::bounded::{calderon_bounded, BoundedGeometry};
use crate::mtf1d::{
    calderon_halfline, calderon_middle_3dom, check_sigmas, jacobi_operator_3dom, HalfLine, JumpData,
};
use crate::numkernel::{eig_generalized, Lu, Matrix};
use crate::{Error, Result, C64};

const MODULE: &str = "spectra";

/// One relaxation parameter per subdomain. For three subdomains the order
/// is `[σ₀, σ₁, σ₂]` with `Ω₀` the middle one.
#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationConfig {
    pub sigmas: Vec<C64>,
}

impl RelaxationConfig {
    pub fn new(sigmas: Vec<C64>) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::Parameter {
                module: MODULE,
                reason: "at least one relaxation parameter is required".into(),
            });
        }
        if sigmas.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::Parameter {
                module: MODULE,
                reason: "relaxation parameters must be finite".into(),
            });
        }
        check_sigmas(MODULE, &sigmas)?;
        Ok(Self { sigmas })
    }

    pub fn real(sigmas: &[f64]) -> Result<Self> {
        Self::new(sigmas.iter().map(|&s| C64::new(s, 0.0)).collect())
    }

    pub fn uniform(sigma: C64, count: usize) -> Result<Self> {
        Self::new(vec![sigma; count])
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    fn expect(&self, count: usize) -> Result<()> {
        if self.sigmas.len() == count {
            Ok(())
        } else {
            Err(Error::Parameter {
                module: MODULE,
                reason: format!("expected {count} relaxation parameters, got {}", self.sigmas.len()),
            })
        }
    }
}

/// The pencil `(A, B)`; its eigenvalues are those of `B⁻¹A`.
#[derive(Clone, Debug)]
pub struct OperatorPencil {
    pub a: Matrix,
    pub b: Matrix,
}

impl OperatorPencil {
    /// `(J, Id)` for an explicitly known operator.
    pub fn explicit(j: Matrix) -> Self {
        let b = Matrix::identity(j.rows());
        Self { a: j, b }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        Ok(eig_generalized(&self.a, &self.b)?.eigenvalues)
    }

    /// `B⁻¹A`.
    pub fn operator(&self) -> Result<Matrix> {
        Lu::factor(&self.b)?.solve(&self.a)
    }
}

/// A subdomain's projector seen on its stacked `[u, ∂ₙu]` coefficients,
/// together with the mass that pairs them.
struct Local<'a> {
    p: &'a Matrix,
    mass: Matrix,
}

fn flip_cols(m: &Matrix) -> Matrix {
    let n = m.cols() / 2;
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if j < n { m[(i, j)] } else { -m[(i, j)] })
}

fn is_zero(s: C64) -> bool {
    s.norm() == 0.0
}

/// Neighbour coupling: each entry `(row block, column block)` says that the
/// unknowns of `row block` see `X` times those of `column block`. `owner`
/// maps a trace block to its subdomain.
struct Layout {
    sizes: Vec<usize>,
    neighbour: Vec<usize>,
    owner: Vec<usize>,
}

impl Layout {
    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0; self.sizes.len() + 1];
        for (k, s) in self.sizes.iter().enumerate() {
            off[k + 1] = off[k] + s;
        }
        off
    }
}

/// Assembles the pencil for subdomains `locals` whose trace blocks are laid
/// out by `layout`.
fn assemble(locals: &[Local<'_>], sigmas: &[C64], layout: &Layout) -> Result<OperatorPencil> {
    let off = layout.offsets();
    let n = off[layout.sizes.len()];
    let mut a = Matrix::zeros(n, n);
    let mut b = Matrix::zeros(n, n);

    // first trace block of each subdomain
    let mut start = vec![usize::MAX; locals.len()];
    for (blk, &d) in layout.owner.iter().enumerate() {
        start[d] = start[d].min(blk);
    }

    for (d, loc) in locals.iter().enumerate() {
        let s = sigmas[d];
        let r0 = off[start[d]];
        let dim = loc.p.rows();
        if is_zero(s) {
            b.set_block(r0, r0, &loc.mass);
            // rows P_num · (X shift); columns of P_num that belong to block k
            // pick up X times the neighbour of k
            for (blk, &owner) in layout.owner.iter().enumerate() {
                if owner != d {
                    continue;
                }
                let c0 = off[blk] - r0;
                let cols = loc.p.block(0, c0, dim, layout.sizes[blk]);
                a.set_block(r0, off[layout.neighbour[blk]], &flip_cols(&cols));
            }
        } else {
            let lhs = &loc.mass.scale(s + 1.0) - loc.p;
            b.set_block(r0, r0, &lhs);
            for (blk, &owner) in layout.owner.iter().enumerate() {
                if owner != d {
                    continue;
                }
                let c0 = off[blk] - r0;
                let m = loc.mass.block(c0, c0, layout.sizes[blk], layout.sizes[blk]);
                a.set_block(off[blk], off[layout.neighbour[blk]], &flip_cols(&m.scale(s)));
            }
        }
    }
    Ok(OperatorPencil { a, b })
}

fn check_dims(p: &Matrix, mass: &Matrix, what: &str) -> Result<()> {
    if p.rows() != mass.rows() || p.cols() != mass.cols() || p.rows() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "{what}: projector is {}x{}, mass block is {}x{}",
            p.rows(),
            p.cols(),
            mass.rows(),
            mass.cols()
        )));
    }
    Ok(())
}

/// Two subdomains sharing one interface, given as projector matrices and
/// their `[u, ∂ₙu]` mass blocks.
pub fn jacobi_pencil_2dom(
    p1: &Matrix,
    mass1: &Matrix,
    p2: &Matrix,
    mass2: &Matrix,
    cfg: &RelaxationConfig,
) -> Result<OperatorPencil> {
    cfg.expect(2)?;
    check_dims(p1, mass1, "subdomain 1")?;
    check_dims(p2, mass2, "subdomain 2")?;
    if p1.rows() != p2.rows() {
        return Err(Error::Dimension(format!(
            "interface traces differ in size: {} and {}",
            p1.rows(),
            p2.rows()
        )));
    }
    let layout = Layout {
        sizes: vec![p1.rows(), p2.rows()],
        neighbour: vec![1, 0],
        owner: vec![0, 1],
    };
    let locals = [
        Local { p: p1, mass: mass1.clone() },
        Local { p: p2, mass: mass2.clone() },
    ];
    assemble(&locals, &cfg.sigmas, &layout)
}

/// Three subdomains in a chain `Ω₁ | Ω₀ | Ω₂`, unknowns
/// `[U₁, U₀₁, U₀₂, U₂]`. `p0` acts on `[U₀₁, U₀₂]`; `cfg` is `[σ₀, σ₁, σ₂]`.
#[allow(clippy::too_many_arguments)]
pub fn jacobi_pencil_3dom(
    p1: &Matrix,
    mass1: &Matrix,
    p0: &Matrix,
    mass0: &Matrix,
    p2: &Matrix,
    mass2: &Matrix,
    cfg: &RelaxationConfig,
) -> Result<OperatorPencil> {
    cfg.expect(3)?;
    check_dims(p1, mass1, "subdomain 1")?;
    check_dims(p2, mass2, "subdomain 2")?;
    check_dims(p0, mass0, "subdomain 0")?;
    if p0.rows() != p1.rows() + p2.rows() {
        return Err(Error::Dimension(format!(
            "middle projector has size {}, expected {} + {}",
            p0.rows(),
            p1.rows(),
            p2.rows()
        )));
    }
    let (s0, s1, s2) = (cfg.sigmas[0], cfg.sigmas[1], cfg.sigmas[2]);
    let layout = Layout {
        sizes: vec![p1.rows(), p1.rows(), p2.rows(), p2.rows()],
        neighbour: vec![1, 0, 3, 2],
        owner: vec![0, 1, 1, 2],
    };
    let locals = [
        Local { p: p1, mass: mass1.clone() },
        Local { p: p0, mass: mass0.clone() },
        Local { p: p2, mass: mass2.clone() },
    ];
    assemble(&locals, &[s1, s0, s2], &layout)
}

/// Two-subdomain Jacobi pencil of the Galerkin projectors of `Ω₁` and `Ω₂`.
pub fn jacobi_2d_2dom(
    p1: &DiscreteCalderon,
    p2: &DiscreteCalderon,
    cfg: &RelaxationConfig,
) -> Result<OperatorPencil> {
    jacobi_pencil_2dom(&p1.p_num, &p1.mass_block(), &p2.p_num, &p2.mass_block(), cfg)
}

/// Three-subdomain Jacobi pencil: `p1` inside `Γ₁`, `p2` outside `Γ₂` and
/// `coupling` the projector of the region between them.
pub fn jacobi_2d_3dom(
    p1: &DiscreteCalderon,
    p2: &DiscreteCalderon,
    coupling: &CouplingBlocks,
    cfg: &RelaxationConfig,
) -> Result<OperatorPencil> {
    jacobi_pencil_3dom(
        &p1.p_num,
        &p1.mass_block(),
        &coupling.p0,
        &coupling.mass_block(),
        &p2.p_num,
        &p2.mass_block(),
        cfg,
    )
}

/// Jacobi pencil of the two half-lines, built from the closed-form
/// projectors with unit mass.
pub fn jacobi_1d_2dom(a: f64, cfg: &RelaxationConfig) -> Result<OperatorPencil> {
    let p1 = calderon_halfline(a, HalfLine::Minus)?.matrix;
    let p2 = calderon_halfline(a, HalfLine::Plus)?.matrix;
    let id = Matrix::identity(2);
    jacobi_pencil_2dom(&p1, &id, &p2, &id, cfg)
}

/// Jacobi operator of the three-interval line `(−∞, −1) | (−1, 1) | (1, ∞)`
/// with one block per interface trace, so the middle coupling `2a g± R` is
/// iterated explicitly; `cfg` is `[σ₀, σ₁, σ₂]`.
pub fn jacobi_1d_3dom(a: f64, cfg: &RelaxationConfig) -> Result<OperatorPencil> {
    cfg.expect(3)?;
    let s = [cfg.sigmas[0], cfg.sigmas[1], cfg.sigmas[2]];
    let none = |x| JumpData::new(0.0, 0.0, x);
    let j = jacobi_operator_3dom(a, s, none(-1.0), none(1.0))?;
    Ok(OperatorPencil::explicit(j.matrix))
}

/// The same three-interval problem with the whole middle projector on the
/// diagonal, the structure used with discrete projectors.
pub fn jacobi_1d_3dom_full_middle(a: f64, cfg: &RelaxationConfig) -> Result<OperatorPencil> {
    let p = calderon_halfline(a, HalfLine::Plus)?.matrix;
    let p0 = calderon_middle_3dom(a)?.matrix;
    let id2 = Matrix::identity(2);
    let id4 = Matrix::identity(4);
    jacobi_pencil_3dom(&p, &id2, &p0, &id4, &p, &id2, cfg)
}

/// Jacobi pencil of `(0, 1)` split at `γ`.
pub fn jacobi_1d_bounded(geom: BoundedGeometry, cfg: &RelaxationConfig) -> Result<OperatorPencil> {
    let (p1, p2) = calderon_bounded(geom);
    let id = Matrix::identity(2);
    jacobi_pencil_2dom(&p1.matrix, &id, &p2.matrix, &id, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtf1d::{jacobi_operator_2dom, theoretical_spectrum};
    use crate::numkernel::multiset_distance;

    fn z(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            RelaxationConfig::real(&[0.1, -1.0]),
            Err(Error::SigmaMinusOne { index: 1, .. })
        ));
        assert!(RelaxationConfig::real(&[]).is_err());
        assert!(RelaxationConfig::real(&[f64::NAN]).is_err());
        let cfg = RelaxationConfig::real(&[0.1, 0.2, 0.3]).unwrap();
        assert!(jacobi_1d_2dom(1.0, &cfg).is_err());
    }

    #[test]
    fn pencil_matches_closed_form_operator_1d() {
        for (s1, s2) in [(0.1, 0.1), (-0.4, 1.0), (2.0, -0.3), (0.0, 0.5), (0.0, 0.0)] {
            let cfg = RelaxationConfig::real(&[s1, s2]).unwrap();
            let pencil = jacobi_1d_2dom(1.3, &cfg).unwrap();
            let j = jacobi_operator_2dom(1.3, z(s1), z(s2), JumpData::at_origin(1.0, 0.0)).unwrap();
            let d = &pencil.operator().unwrap() - &j.matrix;
            assert!(d.max_abs() < 1e-13, "{s1} {s2}: {}", d.max_abs());
        }
    }

    #[test]
    fn full_middle_block_keeps_the_point_spectrum() {
        // R² = 0 for the middle coupling, so inverting the whole middle
        // block changes the operator but not its spectrum; the equal-σ
        // case has 2×2 Jordan blocks, hence the looser tolerance
        for s in [[0.25, 0.25, 0.25], [-0.4, 1.0, 0.25], [0.3, 0.7, 2.0]] {
            let cfg = RelaxationConfig::real(&s).unwrap();
            let full = jacobi_1d_3dom_full_middle(0.7, &cfg).unwrap().eigenvalues().unwrap();
            let split = jacobi_1d_3dom(0.7, &cfg).unwrap().eigenvalues().unwrap();
            let th = theoretical_spectrum(&cfg.sigmas);
            // σ₀ appears twice: once per middle interface
            let expect = [th[0], th[1], th[0], th[1], th[2], th[3], th[4], th[5]];
            assert!(multiset_distance(&full, &expect) < 1e-6, "{s:?}: {full:?}");
            assert!(multiset_distance(&split, &expect) < 1e-6, "{s:?}: {split:?}");
        }
    }

    #[test]
    fn bounded_pencil_spectrum() {
        let geom = BoundedGeometry::new(0.3, 2.0).unwrap();
        let cfg = RelaxationConfig::real(&[0.5, 2.0]).unwrap();
        let ev = jacobi_1d_bounded(geom, &cfg).unwrap().eigenvalues().unwrap();
        let th = theoretical_spectrum(&cfg.sigmas);
        assert!(multiset_distance(&ev, &th) < 1e-10);
    }
}
