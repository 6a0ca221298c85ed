//! `(0, 1)` with homogeneous Dirichlet ends, split at `γ` into
//! `Ω₁ = (0, γ)` and `Ω₂ = (γ, 1)`.
//!
//! Traces follow [`crate::mtf1d`]: `U₁ = (u₁(γ), u₁'(γ))`,
//! `U₂ = (u₂(γ), −u₂'(γ))`, and jumps are `α = u₂(γ) − u₁(γ)`,
//! `β = u₁'(γ) − u₂'(γ)`.
//!
//! Hyperbolic functions are evaluated in scaled form
//! `cosh x = eˣ (1 + e⁻²ˣ)/2`, `sinh x = −eˣ expm1(−2x)/2`. Every projector
//! entry is a ratio of products carrying the same factor `e^{aγ} e^{a(1−γ)}`,
//! which cancels.

use num_complex::Complex64 as C64;

use crate::mtf1d::{
    assemble_two_block, check_material, check_sigmas, trace_flip, CalderonProjector1D,
    JacobiOperator1D, JumpData, MtfSystem, SubdomainLayout,
};
use crate::numkernel::Matrix;
use crate::{Error, Result};

const MODULE: &str = "mtf1d_bounded";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundedGeometry {
    pub gamma: f64,
    pub a: f64,
}

/// `cosh(x) e^{−x}` and `sinh(x) e^{−x}` for `x ≥ 0`.
fn scaled(x: f64) -> (f64, f64) {
    let e = (-2.0 * x).exp();
    (0.5 * (1.0 + e), -0.5 * (-2.0 * x).exp_m1())
}

impl BoundedGeometry {
    pub fn new(gamma: f64, a: f64) -> Result<Self> {
        check_material(MODULE, a)?;
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Geometry {
                module: MODULE,
                reason: format!("split point must lie in (0, 1), got {gamma}"),
            });
        }
        Ok(Self { gamma, a })
    }

    /// Scaled `(ch(aγ), sh(aγ), ch(a(1−γ)), sh(a(1−γ)))`.
    fn hyperbolics(&self) -> [f64; 4] {
        let (c1, s1) = scaled(self.a * self.gamma);
        let (c2, s2) = scaled(self.a * (1.0 - self.gamma));
        [c1, s1, c2, s2]
    }

    /// `D e^{−a} = a[ch(1−γ) sh(γ) + sh(1−γ) ch(γ)] e^{−a}`.
    fn scaled_denominator(&self) -> f64 {
        let [cg, sg, cr, sr] = self.hyperbolics();
        self.a * (cr * sg + sr * cg)
    }

    /// `D = a[cosh(a(1−γ)) sinh(aγ) + sinh(a(1−γ)) cosh(aγ)] = a sinh(a)`;
    /// overflows to `inf` for `a ≳ 710`.
    pub fn denominator(&self) -> f64 {
        self.scaled_denominator() * self.a.exp()
    }
}

/// Closed-form transmission solution `u₁ = c₁ sinh(ax)`, `u₂ = c₂ sinh(a(1−x))`.
#[derive(Clone, Copy, Debug)]
pub struct BoundedSolution {
    pub geometry: BoundedGeometry,
    pub jump: JumpData,
    /// May overflow for very large `a`; evaluation does not use them.
    pub c1: f64,
    pub c2: f64,
}

impl BoundedSolution {
    /// `u(x)` for `x ∈ [0, 1] \ {γ}`.
    pub fn value(&self, x: f64) -> Result<f64> {
        self.eval(x).map(|(u, _)| u)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.eval(x).map(|(_, du)| du)
    }

    /// Limits at `γ` from the left (`side < 0`) or right (`side > 0`).
    pub fn interface_limit(&self, side: f64) -> (f64, f64) {
        self.eval_unchecked(self.geometry.gamma, side)
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let g = self.geometry.gamma;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Geometry {
                module: MODULE,
                reason: format!("evaluation point {x} outside [0, 1]"),
            });
        }
        if x == g {
            return Err(Error::OnInterface(x));
        }
        Ok(self.eval_unchecked(x, x - g))
    }

    fn eval_unchecked(&self, x: f64, side: f64) -> (f64, f64) {
        let BoundedGeometry { gamma, a } = self.geometry;
        let [cg, sg, cr, sr] = self.geometry.hyperbolics();
        let ds = self.geometry.scaled_denominator();
        let (al, be) = (self.jump.alpha, self.jump.beta);
        if side < 0.0 {
            // c₁ sinh(ax) with the e^{a} factor of D cancelled against
            // e^{a(1−γ)} from the coefficient and e^{ax} from sinh
            let k = (-a * cr * al + sr * be) / ds;
            let (cx, sx) = scaled(a * x);
            let w = (a * (x - gamma)).exp();
            (k * sx * w, k * a * cx * w)
        } else {
            let k = (a * cg * al + sg * be) / ds;
            let (cx, sx) = scaled(a * (1.0 - x));
            let w = (a * (gamma - x)).exp();
            (k * sx * w, -k * a * cx * w)
        }
    }
}

pub fn transmission_solve_bounded(geom: BoundedGeometry, jump: JumpData) -> BoundedSolution {
    let BoundedGeometry { gamma, a } = geom;
    let d = geom.denominator();
    let c1 = (-a * (a * (1.0 - gamma)).cosh() * jump.alpha + (a * (1.0 - gamma)).sinh() * jump.beta) / d;
    let c2 = (a * (a * gamma).cosh() * jump.alpha + (a * gamma).sinh() * jump.beta) / d;
    BoundedSolution {
        geometry: geom,
        jump: JumpData { location: gamma, ..jump },
        c1,
        c2,
    }
}

/// Closed-form projectors `(𝑃₁, 𝑃₂)` of the two subintervals.
pub fn calderon_bounded(geom: BoundedGeometry) -> (CalderonProjector1D, CalderonProjector1D) {
    let a = geom.a;
    let [cg, sg, cr, sr] = geom.hyperbolics();
    let d = geom.scaled_denominator();
    let p1 = Matrix::from_real_rows(&[
        &[a * cr * sg / d, sr * sg / d],
        &[a * a * cr * cg / d, a * sr * cg / d],
    ]);
    let p2 = Matrix::from_real_rows(&[
        &[a * cg * sr / d, sg * sr / d],
        &[a * a * cg * cr / d, a * sg * cr / d],
    ]);
    (
        CalderonProjector1D { matrix: p1, a },
        CalderonProjector1D { matrix: p2, a },
    )
}

/// Scalar DtN maps of both subintervals at `γ` and their inverses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtnPair {
    pub dtn1: f64,
    pub dtn2: f64,
    pub ntd1: f64,
    pub ntd2: f64,
}

impl DtnPair {
    pub fn new(dtn1: f64, dtn2: f64) -> Result<Self> {
        if !(dtn1 > 0.0 && dtn2 > 0.0 && dtn1.is_finite() && dtn2.is_finite()) {
            return Err(Error::Geometry {
                module: MODULE,
                reason: format!("DtN values must be positive, got ({dtn1}, {dtn2})"),
            });
        }
        Ok(Self {
            dtn1,
            dtn2,
            ntd1: 1.0 / dtn1,
            ntd2: 1.0 / dtn2,
        })
    }
}

/// `DtN₁ = a coth(aγ)`, `DtN₂ = a coth(a(1−γ))`.
pub fn dtn_operators(geom: BoundedGeometry) -> DtnPair {
    let [cg, sg, cr, sr] = geom.hyperbolics();
    let dtn1 = geom.a * cg / sg;
    let dtn2 = geom.a * cr / sr;
    DtnPair {
        dtn1,
        dtn2,
        ntd1: sg / (geom.a * cg),
        ntd2: sr / (geom.a * cr),
    }
}

/// Projectors rebuilt from the DtN/NtD scalars.
pub fn calderon_from_dtn(pair: DtnPair, a: f64) -> (CalderonProjector1D, CalderonProjector1D) {
    let s = pair.dtn1 + pair.dtn2;
    let t = pair.ntd1 + pair.ntd2;
    let p1 = Matrix::from_real_rows(&[&[pair.dtn2 / s, 1.0 / s], &[1.0 / t, pair.ntd2 / t]]);
    let p2 = Matrix::from_real_rows(&[&[pair.dtn1 / s, 1.0 / s], &[1.0 / t, pair.ntd1 / t]]);
    (
        CalderonProjector1D { matrix: p1, a },
        CalderonProjector1D { matrix: p2, a },
    )
}

/// Bounded two-subdomain MTF system, same layout as the unbounded one.
pub fn assemble_mtf_bounded(
    geom: BoundedGeometry,
    sigma1: C64,
    sigma2: C64,
    jump: JumpData,
) -> Result<MtfSystem> {
    check_sigmas(MODULE, &[sigma1, sigma2])?;
    let (p1, p2) = calderon_bounded(geom);
    assemble_two_block(
        &p1.matrix,
        &p2.matrix,
        sigma1,
        sigma2,
        jump,
        SubdomainLayout::BoundedInterval,
    )
}

/// Block Jacobi operator
/// `[[0, (σ₁ + 𝑃₁)X/(1+σ₁)], [(σ₂ + 𝑃₂)X/(1+σ₂), 0]]`.
/// This form has no division by σ and is the `σ = 0` limit as well.
pub fn jacobi_operator_bounded(
    geom: BoundedGeometry,
    sigma1: C64,
    sigma2: C64,
    jump: JumpData,
) -> Result<JacobiOperator1D> {
    check_sigmas(MODULE, &[sigma1, sigma2])?;
    let (p1, p2) = calderon_bounded(geom);
    let x = trace_flip();
    let id = Matrix::identity(2);
    let m1 = (&id.scale(sigma1) + &p1.matrix).scale(1.0 / (sigma1 + 1.0));
    let m2 = (&id.scale(sigma2) + &p2.matrix).scale(1.0 / (sigma2 + 1.0));
    let mut j = Matrix::zeros(4, 4);
    j.set_block(0, 2, &m1.matmul(&x));
    j.set_block(2, 0, &m2.matmul(&x));
    let (al, be) = (C64::new(jump.alpha, 0.0), C64::new(jump.beta, 0.0));
    let mut rhs_tilde = m1.mul_vec(&[-al, be]);
    rhs_tilde.extend(m2.mul_vec(&[al, be]));
    Ok(JacobiOperator1D {
        matrix: j,
        rhs_tilde,
        sigmas: vec![sigma1, sigma2],
    })
}

/// Interface values `u₁(γ), ∂ₓu₁(γ), u₂(γ), ∂ₓu₂(γ)` of a Schwarz iterate.
/// Derivatives are plain x-derivatives, not outward normals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchwarzState {
    pub u1: f64,
    pub du1: f64,
    pub u2: f64,
    pub du2: f64,
}

impl SchwarzState {
    pub fn new(u1: f64, du1: f64, u2: f64, du2: f64) -> Self {
        Self { u1, du1, u2, du2 }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Multitrace vector `[U₁, U₂] = [u₁, ∂ₓu₁, u₂, −∂ₓu₂]`.
    pub fn to_multitrace(&self) -> Vec<C64> {
        [self.u1, self.du1, self.u2, -self.du2]
            .iter()
            .map(|&v| C64::new(v, 0.0))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        [self.u1, self.du1, self.u2, self.du2]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn is_finite(&self) -> bool {
        self.max_abs().is_finite()
    }
}

/// One optimal Schwarz sweep, both subdomains updated from the previous
/// iterate. Dirichlet traces:
/// `u₁⁺ = (∂ₓu₂ + DtN₂u₂)/(DtN₁+DtN₂)`, `u₂⁺ = (DtN₁u₁ − ∂ₓu₁)/(DtN₁+DtN₂)`;
/// Neumann traces:
/// `∂ₓu₁⁺ = (u₂ + NtD₂∂ₓu₂)/(NtD₁+NtD₂)`, `∂ₓu₂⁺ = (NtD₁∂ₓu₁ − u₁)/(NtD₁+NtD₂)`.
pub fn schwarz_step(pair: &DtnPair, s: &SchwarzState) -> SchwarzState {
    let sum_d = pair.dtn1 + pair.dtn2;
    let sum_n = pair.ntd1 + pair.ntd2;
    SchwarzState {
        u1: (s.du2 + pair.dtn2 * s.u2) / sum_d,
        du1: (s.u2 + pair.ntd2 * s.du2) / sum_n,
        u2: (pair.dtn1 * s.u1 - s.du1) / sum_d,
        du2: (pair.ntd1 * s.du1 - s.u1) / sum_n,
    }
}

/// Linear map of [`schwarz_step`] on `(u₁, ∂ₓu₁, u₂, ∂ₓu₂)`.
pub fn schwarz_update_matrix(geom: BoundedGeometry) -> Matrix {
    let p = dtn_operators(geom);
    let sd = p.dtn1 + p.dtn2;
    let sn = p.ntd1 + p.ntd2;
    Matrix::from_real_rows(&[
        &[0.0, 0.0, p.dtn2 / sd, 1.0 / sd],
        &[0.0, 0.0, 1.0 / sn, p.ntd2 / sn],
        &[p.dtn1 / sd, -1.0 / sd, 0.0, 0.0],
        &[-1.0 / sn, p.ntd1 / sn, 0.0, 0.0],
    ])
}

/// Homogeneous optimal Schwarz iterates `U⁰, …, Uⁿ`.
pub fn optimal_schwarz_run(
    geom: BoundedGeometry,
    u0: SchwarzState,
    n_steps: usize,
) -> Result<Vec<SchwarzState>> {
    if !u0.is_finite() {
        return Err(Error::NonFinite);
    }
    let pair = dtn_operators(geom);
    let mut history = Vec::with_capacity(n_steps + 1);
    history.push(u0);
    for _ in 0..n_steps {
        let next = schwarz_step(&pair, history.last().unwrap());
        history.push(next);
    }
    Ok(history)
}

/// Optimal Schwarz vs block Jacobi on the bounded projectors.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub sigma: f64,
    /// `max |Uⁿ_schwarz − Uⁿ_jacobi|` per iterate.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// First iterate that is zero up to `zero_tol`, if any.
    pub schwarz_zero_step: Option<usize>,
    pub jacobi_zero_step: Option<usize>,
    pub zero_tol: f64,
}

/// Runs both iterations from the same start for `n_steps`, with zero jumps.
/// `sigma = 0` is the equivalent setting; other values serve as a control.
pub fn equivalence_check(
    geom: BoundedGeometry,
    u0: SchwarzState,
    n_steps: usize,
    sigma: f64,
) -> Result<EquivalenceReport> {
    let schwarz = optimal_schwarz_run(geom, u0, n_steps)?;
    let s = C64::new(sigma, 0.0);
    let op = jacobi_operator_bounded(geom, s, s, JumpData::new(0.0, 0.0, geom.gamma))?;
    let zero_tol = 1e-12 * u0.max_abs().max(1.0);

    let mut u = u0.to_multitrace();
    let mut deviations = Vec::with_capacity(n_steps + 1);
    let mut jacobi_zero_step = None;
    let mut schwarz_zero_step = None;
    for (k, st) in schwarz.iter().enumerate() {
        if k > 0 {
            u = op.step(&u);
        }
        let sv = st.to_multitrace();
        let dev = sv
            .iter()
            .zip(&u)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        deviations.push(dev);
        if schwarz_zero_step.is_none() && st.max_abs() <= zero_tol {
            schwarz_zero_step = Some(k);
        }
        if jacobi_zero_step.is_none() && u.iter().all(|z| z.norm() <= zero_tol) {
            jacobi_zero_step = Some(k);
        }
    }
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(EquivalenceReport {
        sigma,
        deviations,
        max_deviation,
        schwarz_zero_step,
        jacobi_zero_step,
        zero_tol,
    })
}
