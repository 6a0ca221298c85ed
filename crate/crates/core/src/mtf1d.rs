//! Closed-form multitrace machinery for `-u'' + a²u = 0` on the real line.
//!
//! Trace convention: a trace pair is `(u, ∂ₙu)` with `n` the outward normal
//! of the owning subdomain, so on `(-∞, 0)` it is `(u(0⁻), u'(0⁻))` and on
//! `(0, ∞)` it is `(u(0⁺), -u'(0⁺))`. Jumps at an interface `x₀` are
//! `α = u(x₀⁺) - u(x₀⁻)` and `β = u'(x₀⁻) - u'(x₀⁺)`.
//!
//! Multitrace vectors are complex because relaxation parameters may be.

use num_complex::Complex64 as C64;

use crate::numkernel::{eig_dense, solve_dense, Lu, Matrix};
use crate::{Error, Result};

const MODULE: &str = "mtf1d";

/// Dirichlet/Neumann datum on one side of an interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePair {
    pub dirichlet: f64,
    pub neumann: f64,
}

impl TracePair {
    pub fn new(dirichlet: f64, neumann: f64) -> Self {
        Self { dirichlet, neumann }
    }

    pub fn to_complex(self) -> [C64; 2] {
        [C64::new(self.dirichlet, 0.0), C64::new(self.neumann, 0.0)]
    }
}

/// Prescribed Dirichlet jump `alpha` and Neumann jump `beta` at `location`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpData {
    pub alpha: f64,
    pub beta: f64,
    pub location: f64,
}

impl JumpData {
    pub fn new(alpha: f64, beta: f64, location: f64) -> Self {
        Self {
            alpha,
            beta,
            location,
        }
    }

    /// Jumps at the origin.
    pub fn at_origin(alpha: f64, beta: f64) -> Self {
        Self::new(alpha, beta, 0.0)
    }

    fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.location.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLine {
    Plus,
    Minus,
}

/// A Calderón projector of the 1D model: 2×2 for a half-line, 4×4 for a
/// bounded middle interval.
#[derive(Clone, Debug)]
pub struct CalderonProjector1D {
    pub matrix: Matrix,
    pub a: f64,
}

impl CalderonProjector1D {
    /// `max |P² − P|`.
    pub fn projector_defect(&self) -> f64 {
        (&self.matrix.matmul(&self.matrix) - &self.matrix).max_abs()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubdomainLayout {
    /// `(-∞, 0) ∪ (0, ∞)`, unknowns `[U₁, U₂]`.
    TwoHalfLines,
    /// `(-∞, -1) ∪ (-1, 1) ∪ (1, ∞)`, unknowns `[U₁, U₀₁, U₀₂, U₂]`.
    ThreeIntervals,
    /// `(0, γ) ∪ (γ, 1)`, unknowns `[U₁, U₂]`.
    BoundedInterval,
}

/// The multitrace linear system `A U = F`.
#[derive(Clone, Debug)]
pub struct MtfSystem {
    pub system_matrix: Matrix,
    pub rhs: Vec<C64>,
    pub sigmas: Vec<C64>,
    pub layout: SubdomainLayout,
}

impl MtfSystem {
    pub fn solve(&self) -> Result<Vec<C64>> {
        Ok(Lu::factor(&self.system_matrix)?.solve_vec(&self.rhs))
    }

    /// `max |A U − F|`.
    pub fn residual(&self, u: &[C64]) -> f64 {
        self.system_matrix
            .mul_vec(u)
            .iter()
            .zip(&self.rhs)
            .map(|(x, f)| (x - f).norm())
            .fold(0.0, f64::max)
    }
}

/// Block Jacobi iteration `Uⁿ⁺¹ = J Uⁿ + F̃`.
#[derive(Clone, Debug)]
pub struct JacobiOperator1D {
    pub matrix: Matrix,
    pub rhs_tilde: Vec<C64>,
    pub sigmas: Vec<C64>,
}

impl JacobiOperator1D {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn step(&self, u: &[C64]) -> Vec<C64> {
        let mut next = self.matrix.mul_vec(u);
        for (x, f) in next.iter_mut().zip(&self.rhs_tilde) {
            *x += f;
        }
        next
    }

    /// All relaxation parameters vanish: the operator is nilpotent.
    pub fn is_nilpotent_limit(&self) -> bool {
        self.sigmas.iter().all(|s| s.norm() == 0.0)
    }

    /// Fixed point `U*`: by running the nilpotent iteration to completion
    /// when every `σ = 0`, otherwise by solving `(Id − J) U = F̃`.
    pub fn fixed_point(&self) -> Result<Vec<C64>> {
        let n = self.dim();
        if self.is_nilpotent_limit() {
            let mut u = vec![C64::new(0.0, 0.0); n];
            for _ in 0..=n {
                u = self.step(&u);
            }
            return Ok(u);
        }
        let lhs = &Matrix::identity(n) - &self.matrix;
        Ok(Lu::factor(&lhs)?.solve_vec(&self.rhs_tilde))
    }

    pub fn spectrum(&self) -> Result<Vec<C64>> {
        Ok(eig_dense(&self.matrix)?.eigenvalues)
    }
}

/// Iterates of a block Jacobi run with their distances to the fixed point.
#[derive(Clone, Debug)]
pub struct IterationHistory {
    /// `U⁰, U¹, …, Uⁿ`.
    pub iterates: Vec<Vec<C64>>,
    /// `‖Uᵏ − U*‖_∞` for each iterate.
    pub errors: Vec<f64>,
    pub fixed_point: Vec<C64>,
}

impl IterationHistory {
    /// First iteration index whose error is at most `tol`.
    pub fn steps_to_tolerance(&self, tol: f64) -> Option<usize> {
        self.errors.iter().position(|&e| e <= tol)
    }
}

pub(crate) fn check_material(module: &'static str, a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMaterial { module, value: a })
    }
}

pub(crate) fn check_sigmas(module: &'static str, sigmas: &[C64]) -> Result<()> {
    for (index, s) in sigmas.iter().enumerate() {
        if (s + 1.0).norm() == 0.0 {
            return Err(Error::SigmaMinusOne { module, index });
        }
    }
    Ok(())
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `X = diag(1, −1)`.
pub fn trace_flip() -> Matrix {
    Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Decaying fundamental solution `e^{−a|x|} / (2a)`.
pub fn green_1d(a: f64, x: f64) -> Result<f64> {
    check_material(MODULE, a)?;
    Ok((-a * x.abs()).exp() / (2.0 * a))
}

/// `d𝒢/dx = −sign(x) e^{−a|x|} / 2`, for `x ≠ 0`.
pub fn green_1d_derivative(a: f64, x: f64) -> Result<f64> {
    check_material(MODULE, a)?;
    if x == 0.0 {
        return Err(Error::OnInterface(x));
    }
    Ok(-x.signum() * (-a * x.abs()).exp() / 2.0)
}

#[derive(Clone, Copy, Debug)]
struct KernelTerm {
    location: f64,
    alpha: f64,
    beta: f64,
}

/// A solution of `-u'' + a²u = 0` away from a finite set of interfaces,
/// given by `u(x) = Σ βₖ 𝒢(x − xₖ) − αₖ 𝒢'(x − xₖ)`.
#[derive(Clone, Debug)]
pub struct Representation1D {
    a: f64,
    terms: Vec<KernelTerm>,
}

impl Representation1D {
    pub fn a(&self) -> f64 {
        self.a
    }

    fn check_point(&self, x: f64) -> Result<()> {
        if self.terms.iter().any(|t| t.location == x) {
            Err(Error::OnInterface(x))
        } else {
            Ok(())
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.value_from(x, 0.0))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.derivative_from(x, 0.0))
    }

    /// One-sided limit `u(x±)`; `side > 0` means from the right.
    pub fn value_limit(&self, x: f64, side: f64) -> f64 {
        self.value_from(x, side)
    }

    pub fn derivative_limit(&self, x: f64, side: f64) -> f64 {
        self.derivative_from(x, side)
    }

    fn value_from(&self, x: f64, side: f64) -> f64 {
        let a = self.a;
        self.terms
            .iter()
            .map(|t| {
                let d = x - t.location;
                let sgn = if d == 0.0 { side.signum() } else { d.signum() };
                let e = (-a * d.abs()).exp();
                t.beta * e / (2.0 * a) + t.alpha * sgn * e / 2.0
            })
            .sum()
    }

    fn derivative_from(&self, x: f64, side: f64) -> f64 {
        let a = self.a;
        self.terms
            .iter()
            .map(|t| {
                let d = x - t.location;
                let sgn = if d == 0.0 { side.signum() } else { d.signum() };
                let e = (-a * d.abs()).exp();
                -t.beta * sgn * e / 2.0 - t.alpha * a * e / 2.0
            })
            .sum()
    }
}

/// Representation formula for a single interface.
pub fn represent_1d(a: f64, jump: JumpData) -> Result<Representation1D> {
    check_material(MODULE, a)?;
    if !jump.is_finite() {
        return Err(Error::Geometry {
            module: MODULE,
            reason: "non-finite jump data".into(),
        });
    }
    Ok(Representation1D {
        a,
        terms: vec![KernelTerm {
            location: jump.location,
            alpha: jump.alpha,
            beta: jump.beta,
        }],
    })
}

/// Representation formula for the three-interval layout with interfaces at
/// `∓1`. Jumps follow the middle-minus-outer convention:
/// `left.alpha = u₀(−1) − u₁(−1)`, `left.beta = −u₀'(−1) + u₁'(−1)`,
/// `right.alpha = u₀(1) − u₂(1)`, `right.beta = u₀'(1) − u₂'(1)`.
/// The `location` fields are ignored.
pub fn represent_1d_3dom(a: f64, left: JumpData, right: JumpData) -> Result<Representation1D> {
    check_material(MODULE, a)?;
    Ok(Representation1D {
        a,
        terms: vec![
            KernelTerm {
                location: -1.0,
                alpha: left.alpha,
                beta: left.beta,
            },
            KernelTerm {
                location: 1.0,
                alpha: -right.alpha,
                beta: right.beta,
            },
        ],
    })
}

/// Half-line projector `(Id + A)/2`, `A = [[0, 1/a], [a, 0]]`; identical for
/// both half-lines.
pub fn calderon_halfline(a: f64, _side: HalfLine) -> Result<CalderonProjector1D> {
    check_material(MODULE, a)?;
    Ok(CalderonProjector1D {
        matrix: Matrix::from_real_rows(&[&[0.5, 0.5 / a], &[0.5 * a, 0.5]]),
        a,
    })
}

/// `R = [[1/2, 1/(2a)], [−a/2, −1/2]]`, the coupling block of the middle
/// projector.
pub fn coupling_block(a: f64) -> Matrix {
    Matrix::from_real_rows(&[&[0.5, 0.5 / a], &[-0.5 * a, -0.5]])
}

/// Projector of a middle interval of the given length,
/// `[[P, 2a g R], [2a g R, P]]` with `g = 𝒢(length)`.
pub fn calderon_middle_interval(a: f64, length: f64) -> Result<CalderonProjector1D> {
    check_material(MODULE, a)?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Geometry {
            module: MODULE,
            reason: format!("middle interval length must be positive, got {length}"),
        });
    }
    let p = calderon_halfline(a, HalfLine::Plus)?.matrix;
    let g = green_1d(a, length)?;
    let r = coupling_block(a).scale_real(2.0 * a * g);
    let mut m = Matrix::zeros(4, 4);
    m.set_block(0, 0, &p);
    m.set_block(0, 2, &r);
    m.set_block(2, 0, &r);
    m.set_block(2, 2, &p);
    Ok(CalderonProjector1D { matrix: m, a })
}

/// Projector of `(−1, 1)`.
pub fn calderon_middle_3dom(a: f64) -> Result<CalderonProjector1D> {
    calderon_middle_interval(a, 2.0)
}

/// Traces `(U₁, U₂)` of the transmission solution with the given jumps.
pub fn exact_traces_2dom(a: f64, jump: JumpData) -> Result<(TracePair, TracePair)> {
    let u = represent_1d(a, jump)?;
    let x0 = jump.location;
    let u1 = TracePair::new(u.value_limit(x0, -1.0), u.derivative_limit(x0, -1.0));
    let u2 = TracePair::new(u.value_limit(x0, 1.0), -u.derivative_limit(x0, 1.0));
    Ok((u1, u2))
}

/// Traces `[U₁, U₀₁, U₀₂, U₂]` of the three-interval transmission solution.
pub fn exact_traces_3dom(a: f64, left: JumpData, right: JumpData) -> Result<[TracePair; 4]> {
    let u = represent_1d_3dom(a, left, right)?;
    Ok([
        TracePair::new(u.value_limit(-1.0, -1.0), u.derivative_limit(-1.0, -1.0)),
        TracePair::new(u.value_limit(-1.0, 1.0), -u.derivative_limit(-1.0, 1.0)),
        TracePair::new(u.value_limit(1.0, -1.0), u.derivative_limit(1.0, -1.0)),
        TracePair::new(u.value_limit(1.0, 1.0), -u.derivative_limit(1.0, 1.0)),
    ])
}

/// Flattens trace pairs into a multitrace vector.
pub fn stack_traces(pairs: &[TracePair]) -> Vec<C64> {
    pairs.iter().flat_map(|p| p.to_complex()).collect()
}

/// The two-subdomain system
/// `[[(1+σ₁)Id − P, −σ₁X], [−σ₂X, (1+σ₂)Id − P]] U = [σ₁(−α, β), σ₂(α, β)]`.
pub fn assemble_mtf_2dom(a: f64, sigma1: C64, sigma2: C64, jump: JumpData) -> Result<MtfSystem> {
    check_material(MODULE, a)?;
    check_sigmas(MODULE, &[sigma1, sigma2])?;
    let p = calderon_halfline(a, HalfLine::Plus)?.matrix;
    assemble_two_block(&p, &p, sigma1, sigma2, jump, SubdomainLayout::TwoHalfLines)
}

pub(crate) fn assemble_two_block(
    p1: &Matrix,
    p2: &Matrix,
    sigma1: C64,
    sigma2: C64,
    jump: JumpData,
    layout: SubdomainLayout,
) -> Result<MtfSystem> {
    let id = Matrix::identity(2);
    let x = trace_flip();
    let mut m = Matrix::zeros(4, 4);
    m.set_block(0, 0, &(&id.scale(1.0 + sigma1) - p1));
    m.set_block(0, 2, &x.scale(-sigma1));
    m.set_block(2, 0, &x.scale(-sigma2));
    m.set_block(2, 2, &(&id.scale(1.0 + sigma2) - p2));
    let (al, be) = (jump.alpha, jump.beta);
    let rhs = vec![sigma1 * -al, sigma1 * be, sigma2 * al, sigma2 * be];
    Ok(MtfSystem {
        system_matrix: m,
        rhs,
        sigmas: vec![sigma1, sigma2],
        layout,
    })
}

/// Block Jacobi operator of the two-subdomain system in closed form.
pub fn jacobi_operator_2dom(
    a: f64,
    sigma1: C64,
    sigma2: C64,
    jump: JumpData,
) -> Result<JacobiOperator1D> {
    check_material(MODULE, a)?;
    check_sigmas(MODULE, &[sigma1, sigma2])?;
    let (al, be) = (jump.alpha, jump.beta);

    let matrix = if sigma1.norm() == 0.0 && sigma2.norm() == 0.0 {
        // [[0, PX], [PX, 0]]
        let px = calderon_halfline(a, HalfLine::Plus)?.matrix.matmul(&trace_flip());
        let mut m = Matrix::zeros(4, 4);
        m.set_block(0, 2, &px);
        m.set_block(2, 0, &px);
        m
    } else {
        let block = |s: C64| {
            let d = (s + 1.0) * 2.0;
            let diag = (s * 2.0 + 1.0) / d;
            Matrix::from_vec(
                2,
                2,
                vec![diag, -c(1.0) / (d * a), c(a) / d, -diag],
            )
        };
        let mut m = Matrix::zeros(4, 4);
        m.set_block(0, 2, &block(sigma1));
        m.set_block(2, 0, &block(sigma2));
        m
    };

    let two_a = 2.0 * a;
    let rhs_tilde = vec![
        -(c(a * al) * (sigma1 * 2.0 + 1.0) - be) / ((sigma1 + 1.0) * two_a),
        -(c(a * al) - (sigma1 * 2.0 + 1.0) * be) / ((sigma1 + 1.0) * 2.0),
        (c(a * al) * (sigma2 * 2.0 + 1.0) + be) / ((sigma2 + 1.0) * two_a),
        (c(a * al) + (sigma2 * 2.0 + 1.0) * be) / ((sigma2 + 1.0) * 2.0),
    ];
    Ok(JacobiOperator1D {
        matrix,
        rhs_tilde,
        sigmas: vec![sigma1, sigma2],
    })
}

/// Runs `n_steps` block Jacobi iterations from `u0`.
pub fn block_jacobi_run(
    op: &JacobiOperator1D,
    u0: &[C64],
    n_steps: usize,
) -> Result<IterationHistory> {
    if u0.len() != op.dim() {
        return Err(Error::Dimension(format!(
            "initial iterate has length {}, operator has dimension {}",
            u0.len(),
            op.dim()
        )));
    }
    let fixed_point = op.fixed_point()?;
    let dist = |u: &[C64]| {
        u.iter()
            .zip(&fixed_point)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    let mut iterates = Vec::with_capacity(n_steps + 1);
    let mut errors = Vec::with_capacity(n_steps + 1);
    let mut u = u0.to_vec();
    errors.push(dist(&u));
    iterates.push(u.clone());
    for _ in 0..n_steps {
        u = op.step(&u);
        errors.push(dist(&u));
        iterates.push(u.clone());
    }
    Ok(IterationHistory {
        iterates,
        errors,
        fixed_point,
    })
}

/// Three-interval system with unknowns `[U₁, U₀₁, U₀₂, U₂]`.
/// `sigmas = [σ₀, σ₁, σ₂]`; see [`represent_1d_3dom`] for the jump convention.
pub fn assemble_mtf_3dom(
    a: f64,
    sigmas: [C64; 3],
    left: JumpData,
    right: JumpData,
) -> Result<MtfSystem> {
    check_material(MODULE, a)?;
    check_sigmas(MODULE, &sigmas)?;
    let [s0, s1, s2] = sigmas;
    let p = calderon_halfline(a, HalfLine::Plus)?.matrix;
    let g = green_1d(a, 2.0)?;
    let r = coupling_block(a).scale_real(2.0 * a * g);
    let id = Matrix::identity(2);
    let x = trace_flip();
    let mut m = Matrix::zeros(8, 8);
    m.set_block(0, 0, &(&id.scale(1.0 + s1) - &p));
    m.set_block(0, 2, &x.scale(-s1));
    m.set_block(2, 0, &x.scale(-s0));
    m.set_block(2, 2, &(&id.scale(1.0 + s0) - &p));
    m.set_block(2, 4, &(-&r));
    m.set_block(4, 2, &(-&r));
    m.set_block(4, 4, &(&id.scale(1.0 + s0) - &p));
    m.set_block(4, 6, &x.scale(-s0));
    m.set_block(6, 4, &x.scale(-s2));
    m.set_block(6, 6, &(&id.scale(1.0 + s2) - &p));
    let rhs = vec![
        s1 * -left.alpha,
        s1 * left.beta,
        s0 * left.alpha,
        s0 * left.beta,
        s0 * right.alpha,
        s0 * right.beta,
        s2 * -right.alpha,
        s2 * right.beta,
    ];
    Ok(MtfSystem {
        system_matrix: m,
        rhs,
        sigmas: sigmas.to_vec(),
        layout: SubdomainLayout::ThreeIntervals,
    })
}

/// Block Jacobi operator of the three-interval system with 2×2 diagonal
/// blocks; the middle coupling `2a g± R` sits in the off-diagonal part.
/// Rows with `σ = 0` use the limit blocks `PX` and `2a g± R`.
pub fn jacobi_operator_3dom(
    a: f64,
    sigmas: [C64; 3],
    left: JumpData,
    right: JumpData,
) -> Result<JacobiOperator1D> {
    let system = assemble_mtf_3dom(a, sigmas, left, right)?;
    let [s0, s1, s2] = sigmas;
    let p = calderon_halfline(a, HalfLine::Plus)?.matrix;
    let px = p.matmul(&trace_flip());
    let id = Matrix::identity(2);
    let row_sigma = [s1, s0, s0, s2];
    let mut j = Matrix::zeros(8, 8);
    let mut f = vec![C64::new(0.0, 0.0); 8];

    for (blk, &s) in row_sigma.iter().enumerate() {
        let r0 = 2 * blk;
        // off-diagonal part of this block row: minus the system entries
        let off = Matrix::from_fn(2, 8, |i, col| {
            if col / 2 == blk {
                C64::new(0.0, 0.0)
            } else {
                -system.system_matrix[(r0 + i, col)]
            }
        });
        let rhs = Matrix::from_vec(2, 1, vec![system.rhs[r0], system.rhs[r0 + 1]]);
        let (rows, frow) = if s.norm() == 0.0 {
            limit_rows(&px, &off, blk, &p, &rhs_data(blk, left, right))
        } else {
            let diag = &id.scale(1.0 + s) - &p;
            (solve_dense(&diag, &off)?, solve_dense(&diag, &rhs)?)
        };
        j.set_block(r0, 0, &rows);
        f[r0] = frow[(0, 0)];
        f[r0 + 1] = frow[(1, 0)];
    }
    Ok(JacobiOperator1D {
        matrix: j,
        rhs_tilde: f,
        sigmas: sigmas.to_vec(),
    })
}

/// Signed jump pair feeding block row `blk` (before the σ factor).
fn rhs_data(blk: usize, left: JumpData, right: JumpData) -> [f64; 2] {
    match blk {
        0 => [-left.alpha, left.beta],
        1 => [left.alpha, left.beta],
        2 => [right.alpha, right.beta],
        _ => [-right.alpha, right.beta],
    }
}

/// `σ → 0` rows: `((1+σ)Id − P)⁻¹ σX → PX`, `((1+σ)Id − P)⁻¹ 2a g R → 2a g R`
/// and `F̃ → P (±α, β)`.
fn limit_rows(px: &Matrix, off: &Matrix, blk: usize, p: &Matrix, data: &[f64; 2]) -> (Matrix, Matrix) {
    // at σ = 0 the only surviving entries of `off` are the R couplings
    let mut rows = off.clone();
    let neighbour = match blk {
        0 => 1,
        1 => 0,
        2 => 3,
        _ => 2,
    };
    rows.set_block(0, 2 * neighbour, px);
    let v = p.mul_vec(&[c(data[0]), c(data[1])]);
    (rows, Matrix::from_vec(2, 1, v))
}

/// `±√(σ/(1+σ))` for each σ, principal square root.
pub fn theoretical_spectrum(sigmas: &[C64]) -> Vec<C64> {
    sigmas
        .iter()
        .flat_map(|&s| {
            let r = (s / (s + 1.0)).sqrt();
            [r, -r]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn green_values() {
        assert_eq!(green_1d(1.0, 0.0).unwrap(), 0.5);
        assert!((green_1d(1.0, 2.0).unwrap() - 0.067_667_641_618_306_35).abs() < 1e-16);
        assert!((green_1d(2.0, -1.0).unwrap() - (-2f64).exp() / 4.0).abs() < 1e-16);
        assert!(matches!(green_1d(0.0, 1.0), Err(Error::NonPositiveMaterial { .. })));
    }

    #[test]
    fn representation_examples() {
        let u = represent_1d(1.0, JumpData::at_origin(0.0, 1.0)).unwrap();
        assert!((u.value(1.0).unwrap() - (-1f64).exp() / 2.0).abs() < 1e-16);
        let u = represent_1d(1.0, JumpData::at_origin(1.0, 0.0)).unwrap();
        assert!((u.value(0.5).unwrap() - 0.303_265_329_856_316_7).abs() < 1e-15);
        let u = represent_1d(1.0, JumpData::at_origin(0.0, 0.0)).unwrap();
        assert_eq!(u.value(-3.0).unwrap(), 0.0);
        assert!(matches!(u.value(0.0), Err(Error::OnInterface(_))));
    }

    #[test]
    fn halfline_projector() {
        let p = calderon_halfline(1.0, HalfLine::Minus).unwrap();
        assert_eq!(p.matrix, Matrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]));
        for a in [0.01, 0.3, 1.0, 7.5, 100.0] {
            let p = calderon_halfline(a, HalfLine::Plus).unwrap();
            assert!(p.projector_defect() < 1e-15);
            let big_a = &p.matrix.scale_real(2.0) - &Matrix::identity(2);
            assert!((&big_a.matmul(&big_a) - &Matrix::identity(2)).max_abs() < 1e-15);
        }
        assert!(calderon_halfline(-1.0, HalfLine::Plus).is_err());
    }

    #[test]
    fn jacobi_2dom_limit_matrix() {
        let op = jacobi_operator_2dom(1.0, z(0.0), z(0.0), JumpData::at_origin(0.3, 0.2)).unwrap();
        let expect = Matrix::from_real_rows(&[
            &[0.0, 0.0, 0.5, -0.5],
            &[0.0, 0.0, 0.5, -0.5],
            &[0.5, -0.5, 0.0, 0.0],
            &[0.5, -0.5, 0.0, 0.0],
        ]);
        assert!((&op.matrix - &expect).max_abs() < 1e-16);
        assert!(op.matrix.pow(2).max_abs() < 1e-16);
    }

    #[test]
    fn closed_form_matches_block_inverse() {
        let a = 1.7;
        let (s1, s2) = (z(0.3), C64::new(-0.2, 0.4));
        let jump = JumpData::at_origin(0.7, -1.1);
        let op = jacobi_operator_2dom(a, s1, s2, jump).unwrap();
        let sys = assemble_mtf_2dom(a, s1, s2, jump).unwrap();
        let mut diag = Matrix::zeros(4, 4);
        diag.set_block(0, 0, &sys.system_matrix.block(0, 0, 2, 2));
        diag.set_block(2, 2, &sys.system_matrix.block(2, 2, 2, 2));
        let off = &diag - &sys.system_matrix;
        let j = solve_dense(&diag, &off).unwrap();
        assert!((&j - &op.matrix).max_abs() < 1e-14);
        let f = solve_dense(&diag, &Matrix::from_vec(4, 1, sys.rhs.clone())).unwrap();
        for i in 0..4 {
            assert!((f[(i, 0)] - op.rhs_tilde[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn mtf_solution_is_the_transmission_trace() {
        let a = 2.0;
        let jump = JumpData::at_origin(0.4, 1.3);
        let sys = assemble_mtf_2dom(a, z(0.5), z(1.5), jump).unwrap();
        let u = sys.solve().unwrap();
        assert!(sys.residual(&u) < 1e-12);
        let (u1, u2) = exact_traces_2dom(a, jump).unwrap();
        let exact = stack_traces(&[u1, u2]);
        for (x, y) in u.iter().zip(&exact) {
            assert!((x - y).norm() < 1e-12);
        }
        // U₁ − X U₂ = (−α, β)
        assert!((u[0] - u[2] - (-0.4)).norm() < 1e-12);
        assert!((u[1] + u[3] - 1.3).norm() < 1e-12);
    }

    #[test]
    fn zero_sigma_drops_jump_data() {
        let sys = assemble_mtf_2dom(1.0, z(0.0), z(0.0), JumpData::at_origin(3.0, -2.0)).unwrap();
        assert!(sys.rhs.iter().all(|f| f.norm() == 0.0));
        assert!(sys.solve().is_err());
    }

    #[test]
    fn sigma_minus_one_is_rejected() {
        let err = jacobi_operator_2dom(1.0, z(-1.0), z(0.2), JumpData::at_origin(0.0, 0.0))
            .unwrap_err();
        assert!(matches!(err, Error::SigmaMinusOne { index: 0, .. }));
        assert!(assemble_mtf_2dom(1.0, z(0.1), z(-1.0), JumpData::at_origin(0.0, 0.0)).is_err());
    }

    #[test]
    fn stationary_at_fixed_point() {
        let op = jacobi_operator_2dom(1.0, z(0.1), z(0.1), JumpData::at_origin(1.0, 0.5)).unwrap();
        let u_star = op.fixed_point().unwrap();
        let h = block_jacobi_run(&op, &u_star, 5).unwrap();
        assert!(h.errors.iter().all(|&e| e < 1e-14));
    }

    #[test]
    fn middle_projector() {
        let p0 = calderon_middle_3dom(1.0).unwrap();
        assert!((p0.matrix[(0, 2)].re - 0.5 * (-2f64).exp()).abs() < 1e-16);
        assert!((2.0 * 1.0 * green_1d(1.0, 2.0).unwrap() - 0.135_335_283_236_612_7).abs() < 1e-15);
        assert!(p0.projector_defect() < 1e-15);
        let p = calderon_halfline(1.3, HalfLine::Plus).unwrap().matrix;
        let r = coupling_block(1.3);
        assert!(p.matmul(&r).max_abs() < 1e-15);
        assert!((&r.matmul(&p) - &r).max_abs() < 1e-15);
        assert!(r.matmul(&r).max_abs() < 1e-15);
    }

    #[test]
    fn three_interval_traces_are_projected() {
        let a = 0.8;
        let left = JumpData::new(0.3, -0.7, -1.0);
        let right = JumpData::new(1.1, 0.4, 1.0);
        let t = exact_traces_3dom(a, left, right).unwrap();
        let p0 = calderon_middle_3dom(a).unwrap().matrix;
        let data = [left.alpha, left.beta, right.alpha, right.beta].map(z);
        let projected = p0.mul_vec(&data);
        let t0 = [t[1].dirichlet, t[1].neumann, t[2].dirichlet, t[2].neumann];
        for (x, y) in projected.iter().zip(t0) {
            assert!((x.re - y).abs() < 1e-14);
        }
    }

    #[test]
    fn single_neumann_jump_three_intervals() {
        let a = 1.4;
        let u = represent_1d_3dom(a, JumpData::new(0.0, 1.0, -1.0), JumpData::new(0.0, 0.0, 1.0))
            .unwrap();
        for x in [-0.5, 0.0, 0.9, 2.0, 5.0] {
            assert!((u.value(x).unwrap() - green_1d(a, x + 1.0).unwrap()).abs() < 1e-16);
        }
        assert!(u.value(1.0).is_err());
    }

    #[test]
    fn three_interval_fixed_point_is_exact_trace() {
        let a = 1.2;
        let left = JumpData::new(0.5, 0.2, -1.0);
        let right = JumpData::new(-0.3, 0.9, 1.0);
        let exact = stack_traces(&exact_traces_3dom(a, left, right).unwrap());
        for sigmas in [[z(0.3), z(0.5), z(2.0)], [z(0.0); 3], [z(0.0), z(0.4), z(0.0)]] {
            let op = jacobi_operator_3dom(a, sigmas, left, right).unwrap();
            let u = op.fixed_point().unwrap();
            for (x, y) in u.iter().zip(&exact) {
                assert!((x - y).norm() < 1e-12, "sigmas {sigmas:?}");
            }
        }
    }

    #[test]
    fn three_interval_limit_matches_closed_form() {
        let a = 0.9;
        let op = jacobi_operator_3dom(a, [z(0.0); 3], JumpData::new(0.0, 0.0, -1.0), JumpData::new(0.0, 0.0, 1.0)).unwrap();
        let px = calderon_halfline(a, HalfLine::Plus).unwrap().matrix.matmul(&trace_flip());
        let r = coupling_block(a).scale_real(2.0 * a * green_1d(a, 2.0).unwrap());
        let mut expect = Matrix::zeros(8, 8);
        expect.set_block(0, 2, &px);
        expect.set_block(2, 0, &px);
        expect.set_block(2, 4, &r);
        expect.set_block(4, 2, &r);
        expect.set_block(4, 6, &px);
        expect.set_block(6, 4, &px);
        assert!((&op.matrix - &expect).max_abs() < 1e-15);
        assert!(op.matrix.pow(4).max_abs() < 1e-13);
    }
}
