//! Quadrature rules on `[0, 1]`.

use num_complex::Complex64 as C64;

use crate::numkernel::{eig_dense_vectors, Matrix};
use crate::{Error, Result};

/// Nodes and weights on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// The rule mapped affinely to `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Rule {
        let h = hi - lo;
        Rule {
            nodes: self.nodes.iter().map(|x| lo + h * x).collect(),
            weights: self.weights.iter().map(|w| w * h).collect(),
        }
    }
}

/// Gauss–Legendre rule with `n` points on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    if n <= 1 {
        return Rule {
            nodes: vec![0.5; n],
            weights: vec![1.0; n],
        };
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

/// Gauss rule for `∫₀¹ −ln(u) f(u) du` with `n` points.
///
/// Recurrence coefficients come from a discretized Stieltjes procedure on a
/// geometrically graded composite Gauss–Legendre rule, nodes and weights from
/// the eigen-decomposition of the Jacobi matrix.
pub fn log_weighted_gauss(n: usize) -> Result<Rule> {
    if n == 0 || n > 40 {
        return Err(Error::Quadrature(format!(
            "log-weighted rule supports 1..=40 points, asked for {n}"
        )));
    }
    let (xs, ws) = graded_log_measure();
    let mut alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    let mut p_prev = vec![0.0; xs.len()];
    let mut p = vec![1.0; xs.len()];
    let mut norm_prev = 1.0;
    for k in 0..n {
        let norm: f64 = ws.iter().zip(&p).map(|(w, v)| w * v * v).sum();
        let first: f64 = ws.iter().zip(&p).zip(&xs).map(|((w, v), x)| w * x * v * v).sum();
        alpha[k] = first / norm;
        beta[k] = if k == 0 { norm } else { norm / norm_prev };
        let next: Vec<f64> = (0..xs.len())
            .map(|i| (xs[i] - alpha[k]) * p[i] - if k == 0 { 0.0 } else { beta[k] * p_prev[i] })
            .collect();
        p_prev = std::mem::replace(&mut p, next);
        norm_prev = norm;
    }

    let jac = Matrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[j].sqrt()
        } else if j + 1 == i {
            beta[i].sqrt()
        } else {
            0.0
        };
        C64::new(v, 0.0)
    });
    let eig = eig_dense_vectors(&jac)?;
    let vecs = eig
        .eigenvectors
        .ok_or_else(|| Error::Quadrature("eigenvectors unavailable".into()))?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let col = vecs.column(k);
            let nrm: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            (eig.eigenvalues[k].re, beta[0] * col[0].norm_sqr() / nrm)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.iter().any(|&(x, w)| !(x > 0.0 && x < 1.0 && w > 0.0)) {
        return Err(Error::Quadrature("log-weighted rule produced invalid nodes".into()));
    }
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Composite discretization of the measure `−ln(u) du` on `[0, 1]`.
fn graded_log_measure() -> (Vec<f64>, Vec<f64>) {
    const LEVELS: i32 = 60;
    let base = gauss_legendre(30);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    let mut hi = 1.0;
    for _ in 0..LEVELS {
        let lo = hi * 0.5;
        let r = base.mapped(lo, hi);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            xs.push(*x);
            ws.push(-w * x.ln());
        }
        hi = lo;
    }
    let r = base.mapped(0.0, hi);
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        xs.push(*x);
        ws.push(-w * x.ln());
    }
    (xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        for n in [1, 2, 5, 8, 16] {
            let r = gauss_legendre(n);
            for k in 0..(2 * n) {
                let got = r.integrate(|x| x.powi(k as i32));
                assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn log_rule_moments() {
        for n in [4, 8, 12, 20] {
            let r = log_weighted_gauss(n).unwrap();
            for k in 0..(2 * n) {
                let got = r.integrate(|x| x.powi(k as i32));
                let expect = 1.0 / ((k as f64 + 1.0) * (k as f64 + 1.0));
                assert!((got - expect).abs() < 1e-13, "n={n} k={k}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn log_rule_rejects_bad_order() {
        assert!(log_weighted_gauss(0).is_err());
    }
}
