#![allow(dead_code)]

use multitrace::bem2d::{
    assemble_calderon_2d, make_circle, make_square, BoundaryMesh, DiscreteCalderon, KernelParams,
    QuadratureOptions, Side,
};
use multitrace::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn circle(n: usize) -> BoundaryMesh {
    make_circle(n, 1.0, [0.0, 0.0]).unwrap()
}

/// Square of side 1 with `n` elements in total.
pub fn unit_square(n: usize) -> BoundaryMesh {
    make_square(n / 4, 1.0, [0.0, 0.0]).unwrap()
}

/// Interior projector with `a1`, exterior with `a2`.
pub fn projectors(mesh: &BoundaryMesh, a1: f64, a2: f64) -> (DiscreteCalderon, DiscreteCalderon) {
    let q = QuadratureOptions::default();
    let p1 = assemble_calderon_2d(mesh, KernelParams::new(a1).unwrap(), Side::Interior, q).unwrap();
    let p2 = assemble_calderon_2d(mesh, KernelParams::new(a2).unwrap(), Side::Exterior, q).unwrap();
    (p1, p2)
}

/// `K_ν(x)` for ν ∈ {0, 1} from `∫₀^∞ exp(−x cosh t) cosh(νt) dt`. The
/// integrand is analytic in a strip, so the trapezoidal rule converges
/// geometrically in the step.
fn k_integral(nu: f64, x: f64) -> f64 {
    let h = 1.0 / 64.0;
    let f = |t: f64| {
        let s = (0.5 * t).sinh();
        (-2.0 * x * s * s).exp() * (nu * t).cosh()
    };
    let mut sum = 0.5 * f(0.0);
    let mut comp = 0.0;
    let mut k = 1;
    loop {
        let v = f(k as f64 * h);
        // Kahan
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if v < 1e-20 * sum {
            break;
        }
        k += 1;
    }
    h * sum * (-x).exp()
}

/// Ascending series, used for `x ≤ 0.5`.
fn k_series(x: f64) -> (f64, f64) {
    const EULER: f64 = 0.577_215_664_901_532_860_6;
    let t = x * x / 4.0;
    let l = (x / 2.0).ln() + EULER;
    let (mut i0, mut i1) = (0.0, 0.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    let mut h = 0.0;
    let mut term = 1.0;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            h += 1.0 / kf;
            term *= t / (kf * kf);
        }
        i0 += term;
        s0 += h * term;
        let term1 = term * (x / 2.0) / (kf + 1.0);
        i1 += term1;
        // K₁ = 1/x + I₁ ln(x/2) − (x/4) Σ (ψ(k+1) + ψ(k+2)) tᵏ/(k!(k+1)!)
        let psi = 2.0 * h + 1.0 / (kf + 1.0) - 2.0 * EULER;
        s1 += psi * term / (kf + 1.0);
    }
    let k0 = -l * i0 + s0;
    let k1 = 1.0 / x + (x / 2.0).ln() * i1 - x / 4.0 * s1;
    (k0, k1)
}

/// Hankel expansion, used for `x ≥ 20`.
fn k_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let j = (2 * k - 1) as f64;
        let next = term * (mu - j * j) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-18 * sum {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

/// Reference `(K₀(x), K₁(x))`.
pub fn k_oracle(x: f64) -> (f64, f64) {
    if x <= 0.5 {
        k_series(x)
    } else if x >= 20.0 {
        (k_asymptotic(0.0, x), k_asymptotic(1.0, x))
    } else {
        (k_integral(0.0, x), k_integral(1.0, x))
    }
}

/// Published table values of `K₀`, `K₁`.
pub const K_TABLE: [(f64, f64, f64); 4] = [
    (0.1, 2.427_069_024_702_016_6, 9.853_844_780_870_606),
    (1.0, 0.421_024_438_240_708_33, 0.601_907_230_197_234_6),
    (2.0, 0.113_893_872_749_533_44, 0.139_865_881_816_522_43),
    (5.0, 3.691_098_334_042_594_3e-3, 4.044_613_445_452_164e-3),
];

/// Cross-checks of the oracle against itself on the overlaps and against
/// the table. Returns the worst relative disagreement.
pub fn oracle_self_check() -> f64 {
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let mut worst: f64 = 0.0;
    for x in [0.3, 0.5] {
        let s = k_series(x);
        worst = worst.max(rel(s.0, k_integral(0.0, x))).max(rel(s.1, k_integral(1.0, x)));
    }
    for x in [20.0, 30.0] {
        worst = worst
            .max(rel(k_asymptotic(0.0, x), k_integral(0.0, x)))
            .max(rel(k_asymptotic(1.0, x), k_integral(1.0, x)));
    }
    for (x, k0, k1) in K_TABLE {
        let o = k_oracle(x);
        worst = worst.max(rel(o.0, k0)).max(rel(o.1, k1));
    }
    worst
}

/// `ar` values spread log-uniformly over `[1e-8, 50]`.
pub fn kernel_arguments(count: usize) -> Vec<f64> {
    let (lo, hi) = (1e-8f64.ln(), 50f64.ln());
    (0..count).map(|k| (lo + (hi - lo) * k as f64 / (count - 1) as f64).exp()).collect()
}
