use num_complex::Complex64 as C64;

use super::{Lu, Matrix};
use crate::{Error, Result};

/// Largest dimension accepted by the dense eigensolvers.
pub const MAX_EIG_DIM: usize = 4000;

/// QR sweeps allowed per eigenvalue before giving up.
const SWEEPS_PER_EIGENVALUE: usize = 30;

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub eigenvalues: Vec<C64>,
    /// Right eigenvectors as unit-norm columns, when requested.
    pub eigenvectors: Option<Matrix>,
    /// `max ‖Av − λv‖ / ‖v‖` over all pairs; zero when vectors were not requested.
    pub residual_norm: f64,
}

impl EigenResult {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// All eigenvalues of a square complex matrix.
pub fn eig_dense(a: &Matrix) -> Result<EigenResult> {
    eig_impl(a, false)
}

/// Eigenvalues and unit right eigenvectors; fills `residual_norm`.
pub fn eig_dense_vectors(a: &Matrix) -> Result<EigenResult> {
    eig_impl(a, true)
}

/// Eigenvalues of the pencil `A v = λ B v`, for invertible `B`.
///
/// `B` is LU-factorized and the pencil is reduced to `B⁻¹A`; `A` and the
/// mass-like parts of `B` are never inverted explicitly.
pub fn eig_generalized(a: &Matrix, b: &Matrix) -> Result<EigenResult> {
    check_pencil(a, b)?;
    let c = Lu::factor(b)?.solve(a)?;
    eig_dense(&c)
}

/// As [`eig_generalized`], with eigenvectors and the residual
/// `max ‖Av − λBv‖ / (‖Bv‖)` measured on the original pencil.
pub fn eig_generalized_vectors(a: &Matrix, b: &Matrix) -> Result<EigenResult> {
    check_pencil(a, b)?;
    let c = Lu::factor(b)?.solve(a)?;
    let mut res = eig_dense_vectors(&c)?;
    if let Some(v) = &res.eigenvectors {
        res.residual_norm = pencil_residual(a, b, &res.eigenvalues, v);
    }
    Ok(res)
}

fn check_pencil(a: &Matrix, b: &Matrix) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "pencil needs equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn eig_impl(a: &Matrix, want_vectors: bool) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_EIG_DIM {
        return Err(Error::Dimension(format!(
            "dimension {n} exceeds the dense eigensolver cap {MAX_EIG_DIM}"
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(EigenResult {
            eigenvalues: Vec::new(),
            eigenvectors: want_vectors.then(|| Matrix::zeros(0, 0)),
            residual_norm: 0.0,
        });
    }

    let mut h = a.clone();
    let mut q = want_vectors.then(|| Matrix::identity(n));
    hessenberg(&mut h, q.as_mut());
    schur(&mut h, q.as_mut())?;
    let eigenvalues: Vec<C64> = (0..n).map(|i| h[(i, i)]).collect();

    match q {
        None => Ok(EigenResult {
            eigenvalues,
            eigenvectors: None,
            residual_norm: 0.0,
        }),
        Some(q) => {
            let v = triangular_eigenvectors(&h, &q);
            let residual_norm = pencil_residual(a, &Matrix::identity(n), &eigenvalues, &v);
            Ok(EigenResult {
                eigenvalues,
                eigenvectors: Some(v),
                residual_norm,
            })
        }
    }
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Householder reduction to upper Hessenberg form, accumulating into `q`.
fn hessenberg(a: &mut Matrix, mut q: Option<&mut Matrix>) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut s = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in 0..m {
            v[i] = a[(k + 1 + i, k)];
        }
        v[0] -= alpha;
        let vn2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vn2;

        // left: rows k+1.., columns k..
        for x in s[k..n].iter_mut() {
            *x = C64::new(0.0, 0.0);
        }
        for i in 0..m {
            let vi = v[i].conj();
            let row = a.row(k + 1 + i);
            for j in k..n {
                s[j] += vi * row[j];
            }
        }
        for i in 0..m {
            let f = v[i] * tau;
            let cols = a.cols();
            let row = &mut a.as_mut_slice()[(k + 1 + i) * cols..(k + 2 + i) * cols];
            for j in k..n {
                row[j] -= f * s[j];
            }
        }
        // right: all rows, columns k+1..
        apply_reflector_right(a, &v[..m], k + 1, tau);
        if let Some(q) = q.as_deref_mut() {
            apply_reflector_right(q, &v[..m], k + 1, tau);
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn apply_reflector_right(a: &mut Matrix, v: &[C64], c0: usize, tau: f64) {
    let cols = a.cols();
    for i in 0..a.rows() {
        let row = &mut a.as_mut_slice()[i * cols..(i + 1) * cols];
        let t: C64 = row[c0..c0 + v.len()].iter().zip(v).map(|(x, y)| x * y).sum();
        let t = t * tau;
        for (x, y) in row[c0..c0 + v.len()].iter_mut().zip(v) {
            *x -= t * y.conj();
        }
    }
}

/// Complex Givens rotation `[c s; -s̄ c]` zeroing `b` in `(a, b)`.
#[inline]
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let nrm = an.hypot(bn);
    (an / nrm, (a / an) * b.conj() / nrm)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let m1 = mid + disc;
    let m2 = mid - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Reduces an upper Hessenberg matrix to upper triangular (Schur) form.
///
/// Without `q` only the active window is updated, which is enough for the
/// eigenvalues on the diagonal.
fn schur(h: &mut Matrix, mut q: Option<&mut Matrix>) -> Result<()> {
    let n = h.rows();
    let full = q.is_some();
    let cap = SWEEPS_PER_EIGENVALUE * n.max(1);
    let norm_scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 0 {
        // locate the active window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut diag = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if diag == 0.0 {
                diag = norm_scale;
            }
            if sub <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }

        total += 1;
        its += 1;
        if total > cap {
            return Err(Error::NoConvergence {
                iterations: total,
                deflated: n - 1 - hi,
                dim: n,
            });
        }

        let mu = if its % 11 == 10 {
            // exceptional shift
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].re.abs(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { lo };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            let cols = h.cols();
            let data = h.as_mut_slice();
            let (top, bottom) = data.split_at_mut((k + 1) * cols);
            let rk = &mut top[k * cols..];
            let rk1 = &mut bottom[..cols];
            for j in k..col_end {
                let x = rk[j];
                let y = rk1[j];
                rk[j] = x * c + s * y;
                rk1[j] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = C64::new(0.0, 0.0);
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            let row_end = (k + 2).min(hi + 1);
            for i in row_start..row_end {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            if let Some(q) = q.as_deref_mut() {
                for i in 0..n {
                    let x = q[(i, k)];
                    let y = q[(i, k + 1)];
                    q[(i, k)] = x * c + y * s.conj();
                    q[(i, k + 1)] = -x * s + y * c;
                }
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}

/// Eigenvectors of `A = Q T Qᴴ` from the triangular factor.
fn triangular_eigenvectors(t: &Matrix, q: &Matrix) -> Matrix {
    let n = t.rows();
    let small = (n as f64) * f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE);
    let mut v = Matrix::zeros(n, n);
    let mut x = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let lambda = t[(k, k)];
        x[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let s: C64 = (j + 1..=k).map(|l| t[(j, l)] * x[l]).sum();
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            x[j] = -s / d;
        }
        let mut col = vec![C64::new(0.0, 0.0); n];
        for (i, c) in col.iter_mut().enumerate() {
            *c = (0..=k).map(|l| q[(i, l)] * x[l]).sum();
        }
        let nrm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (i, c) in col.into_iter().enumerate() {
            v[(i, k)] = if nrm > 0.0 { c / nrm } else { c };
        }
    }
    v
}

fn pencil_residual(a: &Matrix, b: &Matrix, lambdas: &[C64], v: &Matrix) -> f64 {
    let n = a.rows();
    let av = a.matmul(v);
    let bv = b.matmul(v);
    (0..n)
        .map(|k| {
            let mut r2 = 0.0;
            let mut b2 = 0.0;
            for i in 0..n {
                r2 += (av[(i, k)] - lambdas[k] * bv[(i, k)]).norm_sqr();
                b2 += bv[(i, k)].norm_sqr();
            }
            if b2 > 0.0 {
                (r2 / b2).sqrt()
            } else {
                r2.sqrt()
            }
        })
        .fold(0.0, f64::max)
}

/// Sorts by real part, then imaginary part.
pub fn sort_eigenvalues(values: &mut [C64]) {
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Largest distance in a greedy nearest-neighbour matching of two
/// equally sized multisets. Returns `f64::INFINITY` when sizes differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    sort_eigenvalues(&mut a);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in &a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (z - w).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
