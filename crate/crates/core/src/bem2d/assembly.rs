//! Galerkin P1 matrices of the single layer `V`, double layer `K`, its
//! adjoint `K'` and the hypersingular operator `W` for the kernel
//! `𝒢(r) = K₀(ar)/(2π)`.
//!
//! `K v(x) = ∫ ∂_{n(y)}𝒢(x − y) v(y) ds(y)`, `K'` is its transpose and `W` is
//! assembled in the integrated-by-parts form
//! `⟨Wu, v⟩ = ∬ 𝒢 ∂_τu ∂_τv + a² ∬ 𝒢 (n(x)·n(y)) u v`.
//!
//! Element pairs are integrated with tensor Gauss–Legendre rules when they
//! are disjoint. Coincident pairs use the substitution `u = |s − t|` and a
//! log-weighted rule for the `ln|s − t|` part; pairs sharing a vertex use a
//! Duffy split at the vertex with the `ln ξ` part peeled off likewise.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::bessel::{i0_i1, k0_k1, k0_log_remainder};
use super::mesh::{BoundaryMesh, ElementGeometry, Point};
use super::quadrature::{gauss_legendre, log_weighted_gauss, Rule};
use crate::numkernel::Matrix;
use crate::{Error, Result};

const INV_2PI: f64 = 0.5 / PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    pub a: f64,
}

impl KernelParams {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(Self { a })
        } else {
            Err(Error::NonPositiveMaterial {
                module: "bem2d",
                value: a,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Gauss–Legendre points per direction on regular pairs.
    pub regular_order: usize,
    /// Points per direction on coincident and adjacent pairs.
    pub singular_order: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            regular_order: 8,
            singular_order: 10,
        }
    }
}

/// `K₀(ar)/(2π)`.
pub fn kernel_2d(a: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: format!("kernel evaluated at r = {r}"),
        });
    }
    KernelParams::new(a)?;
    Ok(k0_k1(a * r).0 * INV_2PI)
}

/// `∂_{n(y)} 𝒢(x − y) = −a K₁(ar) n(y)·(y − x) / (2π r)`.
pub fn kernel_normal_derivative(a: f64, x: Point, y: Point, n_y: Point) -> Result<f64> {
    let d = [y[0] - x[0], y[1] - x[1]];
    let r = d[0].hypot(d[1]);
    if !(r > 0.0) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: "kernel derivative evaluated at coincident points".into(),
        });
    }
    KernelParams::new(a)?;
    Ok(-a * k0_k1(a * r).1 * (n_y[0] * d[0] + n_y[1] * d[1]) / r * INV_2PI)
}

/// Galerkin blocks on one boundary mesh, indexed by mesh nodes.
#[derive(Clone, Debug)]
pub struct BemOperatorSet {
    pub v: Matrix,
    pub k: Matrix,
    pub k_adj: Matrix,
    pub w: Matrix,
    /// P1 boundary mass matrix.
    pub mass: Matrix,
    pub a: f64,
}

impl BemOperatorSet {
    pub fn n_nodes(&self) -> usize {
        self.mass.rows()
    }

    /// `max|B − Bᵀ| / max|B|` for `V` and `W`.
    pub fn symmetry_defects(&self) -> (f64, f64) {
        let d = |m: &Matrix| (m - &m.transpose()).max_abs() / m.max_abs();
        (d(&self.v), d(&self.w))
    }
}

/// Local 2×2 moments `∬ 𝒢 φ_a φ_b` and `∬ ∂_{n(y)}𝒢 φ_a φ_b` (with the
/// element lengths included), indexed `[test][trial]`.
#[derive(Clone, Copy, Debug, Default)]
struct LocalMoments {
    v: [[f64; 2]; 2],
    k: [[f64; 2]; 2],
}

struct Rules {
    regular: Rule,
    singular: Rule,
    log: Rule,
    inner: Rule,
}

pub fn assemble_operators(
    mesh: &BoundaryMesh,
    params: KernelParams,
    quad: QuadratureOptions,
) -> Result<BemOperatorSet> {
    mesh.validate()?;
    if quad.regular_order == 0 || quad.singular_order == 0 {
        return Err(Error::Quadrature("quadrature orders must be positive".into()));
    }
    let a = params.a;
    let rules = Rules {
        regular: gauss_legendre(quad.regular_order),
        singular: gauss_legendre(quad.singular_order),
        log: log_weighted_gauss(quad.singular_order)?,
        inner: gauss_legendre(3),
    };
    let n = mesh.n_nodes();
    let ne = mesh.n_elements();
    let geo: Vec<ElementGeometry> = (0..ne).map(|e| mesh.geometry(e)).collect();

    // one pair of dense rows (for the two test nodes) per test element
    let rows: Vec<[Vec<f64>; 6]> = (0..ne)
        .into_par_iter()
        .map(|ex| {
            let mut out: [Vec<f64>; 6] = Default::default();
            for r in out.iter_mut() {
                *r = vec![0.0; n];
            }
            let gx = &geo[ex];
            for ey in 0..ne {
                let gy = &geo[ey];
                let m = local_moments(mesh, &geo, ex, ey, a, &rules);
                let vsum: f64 = m.v.iter().flatten().sum();
                let ndot = gx.normal[0] * gy.normal[0] + gx.normal[1] * gy.normal[1];
                let scale = vsum / (gx.length * gy.length);
                for ia in 0..2 {
                    for ib in 0..2 {
                        let col = mesh.elements[ey].nodes[ib];
                        let d = if ia == ib { 1.0 } else { -1.0 };
                        out[ia][col] += m.v[ia][ib];
                        out[2 + ia][col] += m.k[ia][ib];
                        out[4 + ia][col] += d * scale + a * a * ndot * m.v[ia][ib];
                    }
                }
            }
            out
        })
        .collect();

    let mut v = vec![0.0; n * n];
    let mut k = vec![0.0; n * n];
    let mut w = vec![0.0; n * n];
    let mut mass = vec![0.0; n * n];
    for (ex, r) in rows.iter().enumerate() {
        let nodes = mesh.elements[ex].nodes;
        for ia in 0..2 {
            let row = nodes[ia] * n;
            for j in 0..n {
                v[row + j] += r[ia][j];
                k[row + j] += r[2 + ia][j];
                w[row + j] += r[4 + ia][j];
            }
        }
        let l6 = geo[ex].length / 6.0;
        for ia in 0..2 {
            for ib in 0..2 {
                mass[nodes[ia] * n + nodes[ib]] += if ia == ib { 2.0 * l6 } else { l6 };
            }
        }
    }
    let to_m = |d: Vec<f64>| Matrix::from_real(n, n, &d);
    let k = to_m(k);
    let out = BemOperatorSet {
        v: to_m(v),
        k_adj: k.transpose(),
        k,
        w: to_m(w),
        mass: to_m(mass),
        a,
    };
    if !(out.v.is_finite() && out.k.is_finite() && out.w.is_finite()) {
        return Err(Error::Quadrature("non-finite Galerkin entries".into()));
    }
    Ok(out)
}

fn shared_vertex(mesh: &BoundaryMesh, ex: usize, ey: usize) -> Option<(usize, usize)> {
    let nx = mesh.elements[ex].nodes;
    let ny = mesh.elements[ey].nodes;
    for (ix, &p) in nx.iter().enumerate() {
        for (iy, &q) in ny.iter().enumerate() {
            if p == q {
                return Some((ix, iy));
            }
        }
    }
    None
}

fn local_moments(
    mesh: &BoundaryMesh,
    geo: &[ElementGeometry],
    ex: usize,
    ey: usize,
    a: f64,
    rules: &Rules,
) -> LocalMoments {
    if ex == ey {
        coincident(&geo[ex], a, rules)
    } else if let Some((ix, iy)) = shared_vertex(mesh, ex, ey) {
        adjacent(&geo[ex], &geo[ey], ix, iy, a, rules)
    } else {
        regular(&geo[ex], &geo[ey], a, &rules.regular)
    }
}

fn basis(s: f64) -> [f64; 2] {
    [1.0 - s, s]
}

fn regular(gx: &ElementGeometry, gy: &ElementGeometry, a: f64, rule: &Rule) -> LocalMoments {
    let mut m = LocalMoments::default();
    let jac = gx.length * gy.length;
    for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
        let x = gx.point(s);
        let px = basis(s);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let y = gy.point(t);
            let d = [y[0] - x[0], y[1] - x[1]];
            let r = d[0].hypot(d[1]);
            let (k0, k1) = k0_k1(a * r);
            let g = k0 * INV_2PI;
            let dn = -a * k1 * (gy.normal[0] * d[0] + gy.normal[1] * d[1]) / r * INV_2PI;
            let w = ws * wt * jac;
            let py = basis(t);
            for ia in 0..2 {
                for ib in 0..2 {
                    let f = w * px[ia] * py[ib];
                    m.v[ia][ib] += f * g;
                    m.k[ia][ib] += f * dn;
                }
            }
        }
    }
    m
}

/// Same element. `K` vanishes because `n(y)·(y − x) = 0` on a straight
/// segment. With `u = |s − t|`,
/// `∬ F(|s − t|) φ_a(s) φ_b(t) = ∫₀¹ F(u) Φ_ab(u) du`,
/// `Φ_ab(u) = ∫₀^{1−u} [φ_a(t+u)φ_b(t) + φ_a(t)φ_b(t+u)] dt`.
fn coincident(g: &ElementGeometry, a: f64, rules: &Rules) -> LocalMoments {
    let l = g.length;
    let al = a * l;
    let ln_al = al.ln();
    let phi = |u: f64| {
        let mut out = [[0.0; 2]; 2];
        let inner = rules.inner.mapped(0.0, 1.0 - u);
        for (&t, &w) in inner.nodes.iter().zip(&inner.weights) {
            let (p, q) = (basis(t + u), basis(t));
            for ia in 0..2 {
                for ib in 0..2 {
                    out[ia][ib] += w * (p[ia] * q[ib] + q[ia] * p[ib]);
                }
            }
        }
        out
    };
    let mut m = LocalMoments::default();
    // 2π𝒢(Lu) = [K₀(aLu) + ln(aLu) I₀(aLu)] − ln(aL) I₀(aLu) − ln(u) I₀(aLu)
    for (&u, &w) in rules.singular.nodes.iter().zip(&rules.singular.weights) {
        let z = al * u;
        let smooth = k0_log_remainder(z) - ln_al * i0_i1(z).0;
        let f = phi(u);
        for ia in 0..2 {
            for ib in 0..2 {
                m.v[ia][ib] += w * smooth * f[ia][ib];
            }
        }
    }
    for (&u, &w) in rules.log.nodes.iter().zip(&rules.log.weights) {
        let i0 = i0_i1(al * u).0;
        let f = phi(u);
        for ia in 0..2 {
            for ib in 0..2 {
                m.v[ia][ib] += w * i0 * f[ia][ib];
            }
        }
    }
    for row in m.v.iter_mut() {
        for v in row.iter_mut() {
            *v *= l * l * INV_2PI;
        }
    }
    m
}

/// Elements sharing one vertex: local index `ix` of `gx` and `iy` of `gy`.
fn adjacent(
    gx: &ElementGeometry,
    gy: &ElementGeometry,
    ix: usize,
    iy: usize,
    a: f64,
    rules: &Rules,
) -> LocalMoments {
    let vx = if ix == 0 { gx.p0 } else { gx.p1 };
    let ox = if ix == 0 { gx.p1 } else { gx.p0 };
    let oy = if iy == 0 { gy.p1 } else { gy.p0 };
    let dx = [ox[0] - vx[0], ox[1] - vx[1]];
    let dy = [oy[0] - vx[0], oy[1] - vx[1]];
    let jac = gx.length * gy.length;
    let ny = gy.normal;

    // reparametrised basis: vertex function 1 − s', far function s'
    let local = |idx_vertex: usize, s: f64| {
        let mut p = [0.0; 2];
        p[idx_vertex] = 1.0 - s;
        p[1 - idx_vertex] = s;
        p
    };

    let mut m = LocalMoments::default();
    let mut add = |sp: f64, tp: f64, wv: f64, wk: f64| {
        let px = local(ix, sp);
        let py = local(iy, tp);
        for ia in 0..2 {
            for ib in 0..2 {
                let f = px[ia] * py[ib];
                m.v[ia][ib] += f * wv;
                m.k[ia][ib] += f * wk;
            }
        }
    };

    // triangle 1: s' = ξ, t' = ξη; triangle 2: t' = ξ, s' = ξη
    for tri in 0..2 {
        for (&eta, &we) in rules.singular.nodes.iter().zip(&rules.singular.weights) {
            let dir = if tri == 0 {
                [dx[0] - eta * dy[0], dx[1] - eta * dy[1]]
            } else {
                [eta * dx[0] - dy[0], eta * dx[1] - dy[1]]
            };
            // r = ξ ρ, y − x = −ξ·dir
            let rho = dir[0].hypot(dir[1]);
            let ln_arho = (a * rho).ln();
            let ndot = -(ny[0] * dir[0] + ny[1] * dir[1]);
            let st = |xi: f64| if tri == 0 { (xi, xi * eta) } else { (xi * eta, xi) };
            for (&xi, &wx) in rules.singular.nodes.iter().zip(&rules.singular.weights) {
                let z = a * xi * rho;
                let (_, k1) = k0_k1(z);
                let (i0, i1) = i0_i1(z);
                let w = we * wx * xi * jac;
                let smooth = (k0_log_remainder(z) - ln_arho * i0) * INV_2PI;
                // ∂ₙ𝒢 = −a K₁(aξρ) n·(−dir) / (2π ρ) with K₁ − ln(ξ) I₁ smooth in ξ
                let dn = -a * (k1 - xi.ln() * i1) * ndot / rho * INV_2PI;
                let (sp, tp) = st(xi);
                add(sp, tp, w * smooth, w * dn);
            }
            // the −ln(ξ) parts with the log-weighted rule
            for (&xi, &wx) in rules.log.nodes.iter().zip(&rules.log.weights) {
                let (i0, i1) = i0_i1(a * xi * rho);
                let w = we * wx * xi * jac * INV_2PI;
                let (sp, tp) = st(xi);
                add(sp, tp, w * i0, w * a * i1 * ndot / rho);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::super::mesh::{make_circle, make_square};
    use super::*;

    #[test]
    fn kernel_values() {
        let g = kernel_2d(1.0, 1.0).unwrap();
        assert!((g - 0.421_024_438_240_708_33 / (2.0 * PI)).abs() < 1e-15);
        assert!((g - 0.067_008_1).abs() < 1e-7);
        assert!(kernel_2d(1.0, 0.0).is_err());
        assert!(kernel_2d(-1.0, 1.0).is_err());
        let d = kernel_normal_derivative(1.0, [0.0, 0.0], [1.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((d + 0.601_907_230_197_234_6 / (2.0 * PI)).abs() < 1e-15);
    }

    /// Brute-force oracle for a coincident element: graded composite Gauss
    /// panels towards the diagonal in `t` and towards both ends in `s`.
    fn brute_coincident(g: &ElementGeometry, a: f64) -> [[f64; 2]; 2] {
        let rule = gauss_legendre(20);
        let graded = |lo: f64, hi: f64, toward_lo: bool| {
            let mut out = Vec::new();
            let mut len = hi - lo;
            for _ in 0..40 {
                let half = 0.5 * len;
                out.push(if toward_lo { (lo + half, lo + len) } else { (hi - len, hi - half) });
                len = half;
            }
            out
        };
        let mut outer_panels = graded(0.0, 0.5, true);
        outer_panels.extend(graded(0.5, 1.0, false));
        let mut out = [[0.0; 2]; 2];
        for (s0, s1) in outer_panels {
            let ro = rule.mapped(s0, s1);
            for (&s, &ws) in ro.nodes.iter().zip(&ro.weights) {
                let mut panels = graded(0.0, s, false);
                panels.extend(graded(s, 1.0, true));
                for (lo, hi) in panels {
                    let ri = rule.mapped(lo, hi);
                    for (&t, &wt) in ri.nodes.iter().zip(&ri.weights) {
                        let r = g.length * (s - t).abs();
                        if r == 0.0 {
                            continue;
                        }
                        let k = k0_k1(a * r).0 * INV_2PI;
                        let (px, py) = (basis(s), basis(t));
                        for ia in 0..2 {
                            for ib in 0..2 {
                                out[ia][ib] += ws * wt * k * px[ia] * py[ib] * g.length * g.length;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn coincident_matches_brute_force() {
        let mesh = make_circle(8, 1.0, [0.0, 0.0]).unwrap();
        let g = mesh.geometry(0);
        let rules = Rules {
            regular: gauss_legendre(8),
            singular: gauss_legendre(10),
            log: log_weighted_gauss(10).unwrap(),
            inner: gauss_legendre(3),
        };
        for a in [0.3, 1.0, 5.0] {
            let m = coincident(&g, a, &rules);
            let b = brute_coincident(&g, a);
            for ia in 0..2 {
                for ib in 0..2 {
                    assert!((m.v[ia][ib] - b[ia][ib]).abs() < 1e-9 * b[ia][ib].abs(), "a={a} {} {}", m.v[ia][ib], b[ia][ib]);
                }
            }
        }
    }

    #[test]
    fn adjacent_matches_refined_regular() {
        // compare with a heavily subdivided regular rule on the pair
        let mesh = make_square(1, 1.0, [0.0, 0.0]).unwrap();
        let rules = Rules {
            regular: gauss_legendre(8),
            singular: gauss_legendre(10),
            log: log_weighted_gauss(10).unwrap(),
            inner: gauss_legendre(3),
        };
        let (ex, ey) = (0, 1);
        let (ix, iy) = shared_vertex(&mesh, ex, ey).unwrap();
        let (gx, gy) = (mesh.geometry(ex), mesh.geometry(ey));
        let m = adjacent(&gx, &gy, ix, iy, 1.0, &rules);
        // graded sub-panels towards the shared corner
        let mut panels = Vec::new();
        let mut hi = 1.0;
        for _ in 0..40 {
            panels.push((hi * 0.5, hi));
            hi *= 0.5;
        }
        let rule = gauss_legendre(24);
        let mut v = [[0.0; 2]; 2];
        let mut k = [[0.0; 2]; 2];
        for &(a0, a1) in &panels {
            for &(b0, b1) in &panels {
                let rx = rule.mapped(a0, a1);
                let ry = rule.mapped(b0, b1);
                for (&s, &ws) in rx.nodes.iter().zip(&rx.weights) {
                    for (&t, &wt) in ry.nodes.iter().zip(&ry.weights) {
                        // shared vertex is p1 of element 0 and p0 of element 1
                        let (ss, tt) = (1.0 - s, t);
                        let x = gx.point(ss);
                        let y = gy.point(tt);
                        let d = [y[0] - x[0], y[1] - x[1]];
                        let r = d[0].hypot(d[1]);
                        let (k0, k1) = k0_k1(r);
                        let dn = -k1 * (gy.normal[0] * d[0] + gy.normal[1] * d[1]) / r * INV_2PI;
                        let (px, py) = (basis(ss), basis(tt));
                        for ia in 0..2 {
                            for ib in 0..2 {
                                let f = ws * wt * px[ia] * py[ib];
                                v[ia][ib] += f * k0 * INV_2PI;
                                k[ia][ib] += f * dn;
                            }
                        }
                    }
                }
            }
        }
        for ia in 0..2 {
            for ib in 0..2 {
                assert!((m.v[ia][ib] - v[ia][ib]).abs() < 1e-9, "V {ia}{ib}");
                assert!((m.k[ia][ib] - k[ia][ib]).abs() < 1e-8, "K {ia}{ib} {} {}", m.k[ia][ib], k[ia][ib]);
            }
        }
    }

    #[test]
    fn symmetric_blocks_and_circle_symmetry() {
        let mesh = make_circle(32, 1.0, [0.0, 0.0]).unwrap();
        let ops = assemble_operators(&mesh, KernelParams::new(1.0).unwrap(), QuadratureOptions::default())
            .unwrap();
        let (sv, sw) = ops.symmetry_defects();
        assert!(sv < 1e-10 && sw < 1e-10, "{sv} {sw}");
        // V applied to the constant density is constant over the nodes
        let ones = vec![crate::C64::new(1.0, 0.0); 32];
        let vq = ops.v.mul_vec(&ones);
        let spread = vq.iter().map(|z| (z - vq[0]).norm()).fold(0.0, f64::max);
        assert!(spread < 1e-12);
        // mass matrix integrates 1 to the perimeter
        let total: f64 = ops.mass.mul_vec(&ones).iter().map(|z| z.re).sum();
        assert!((total - mesh.total_length()).abs() < 1e-13);
    }
}
