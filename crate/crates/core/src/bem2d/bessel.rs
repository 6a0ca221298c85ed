//! Modified Bessel functions of integer order 0 and 1 for real `x > 0`.
//!
//! Power series up to `x = 2`, Temme's continued fraction (CF2, Steed's
//! algorithm) beyond.

use std::f64::consts::{LN_2, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

/// `(I₀(x), I₁(x))`. All series terms are positive, so this is accurate for
/// any `x ≥ 0` short of overflow.
pub fn i0_i1(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let (mut term0, mut term1) = (1.0, 1.0);
    let (mut s0, mut s1) = (1.0, 1.0);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term0 *= t / (kf * kf);
        term1 *= t / (kf * (kf + 1.0));
        s0 += term0;
        s1 += term1;
        if term0 <= f64::EPSILON * 0.25 * s0 && term1 <= f64::EPSILON * 0.25 * s1 {
            break;
        }
    }
    (s0, 0.5 * x * s1)
}

pub fn bessel_i0(x: f64) -> f64 {
    i0_i1(x).0
}

/// `(K₀(x), K₁(x))` for `x > 0`; NaN otherwise.
pub fn k0_k1(x: f64) -> (f64, f64) {
    if !(x > 0.0) {
        return (f64::NAN, f64::NAN);
    }
    if x <= SERIES_LIMIT {
        k_series(x)
    } else {
        k_continued_fraction(x)
    }
}

pub fn bessel_k0(x: f64) -> f64 {
    k0_k1(x).0
}

pub fn bessel_k1(x: f64) -> f64 {
    k0_k1(x).1
}

fn k_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let lnx2 = (0.5 * x).ln();
    let (i0, i1) = i0_i1(x);
    // K₀ = −(ln(x/2) + γ) I₀ + Σ H_k tᵏ/(k!)²
    // K₁ = 1/x + ln(x/2) I₁ − (x/4) Σ (ψ(k+1) + ψ(k+2)) tᵏ/(k!(k+1)!)
    let mut h = 0.0;
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut sum0 = 0.0;
    let mut sum1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        h += 1.0 / kf;
        term0 *= t / (kf * kf);
        term1 *= t / (kf * (kf + 1.0));
        let psi_sum = 2.0 * h + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        sum0 += h * term0;
        sum1 += psi_sum * term1;
        if term0 * h < 1e-18 * sum0.abs() && term1 < 1e-18 {
            break;
        }
    }
    let k0 = -(lnx2 + EULER_GAMMA) * i0 + sum0;
    let k1 = 1.0 / x + lnx2 * i1 - 0.25 * x * sum1;
    (k0, k1)
}

fn k_continued_fraction(x: f64) -> (f64, f64) {
    // order μ = 0
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `K₀(z) + ln(z) I₀(z)`, an entire function of `z²`. Used to peel the
/// logarithm off the kernel on singular element pairs.
pub fn k0_log_remainder(z: f64) -> f64 {
    if z <= 8.0 {
        let t = 0.25 * z * z;
        let mut term = 1.0;
        let mut h = 0.0;
        let mut sum = -EULER_GAMMA;
        let mut i0 = 1.0;
        for k in 1..MAX_TERMS {
            let kf = k as f64;
            h += 1.0 / kf;
            term *= t / (kf * kf);
            i0 += term;
            sum += (h - EULER_GAMMA) * term;
            if term * (h + 1.0) < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        LN_2 * i0 + sum
    } else {
        bessel_k0(z) + z.ln() * bessel_i0(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values at 30 significant digits
    const TABLE: [(f64, f64, f64); 8] = [
        (1e-6, 13.931_442_073_626_419, 999_999.999_992_784_3),
        (0.1, 2.427_069_024_702_016_6, 9.853_844_780_870_606),
        (1.0, 0.421_024_438_240_708_33, 0.601_907_230_197_234_6),
        (2.0, 0.113_893_872_749_533_44, 0.139_865_881_816_522_43),
        (2.1, 0.100_783_740_889_966_95, 0.122_746_411_533_507_91),
        (5.0, 0.003_691_098_334_042_594, 0.004_044_613_445_452_164),
        (20.0, 5.741_237_815_336_524e-10, 5.883_057_969_557_038e-10),
        (50.0, 3.410_167_749_789_495_5e-23, 3.444_102_226_717_555_6e-23),
    ];

    #[test]
    fn matches_reference_table() {
        for (x, k0, k1) in TABLE {
            let (a, b) = k0_k1(x);
            assert!(((a - k0) / k0).abs() < 1e-13, "K0({x}) = {a}");
            assert!(((b - k1) / k1).abs() < 1e-13, "K1({x}) = {b}");
        }
    }

    #[test]
    fn i_values() {
        let (i0, i1) = i0_i1(1.0);
        assert!((i0 - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((i1 - 0.565_159_103_992_485).abs() < 1e-15);
        assert!((bessel_i0(12.0) / 18_948.925_349_296_31 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_remainder_consistent() {
        for z in [1e-4, 0.3, 1.0, 4.0, 7.9, 8.1, 15.0] {
            let direct = bessel_k0(z) + z.ln() * bessel_i0(z);
            assert!((k0_log_remainder(z) - direct).abs() < 1e-13 * direct.abs().max(1.0), "z={z}");
        }
        assert!((k0_log_remainder(0.0) - (LN_2 - EULER_GAMMA)).abs() < 1e-16);
    }

    #[test]
    fn invalid_argument_is_nan() {
        assert!(bessel_k0(0.0).is_nan());
        assert!(bessel_k1(-1.0).is_nan());
    }
}
