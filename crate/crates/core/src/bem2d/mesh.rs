//! Closed polygonal boundaries made of straight two-node elements.
//!
//! The normal of element `p₀ → p₁` is the right-hand normal of the direction
//! `p₁ − p₀`. A counter-clockwise curve therefore has normals pointing out of
//! the region it encloses, and a clockwise curve has normals pointing into it.
//!
//! Text format (lines starting with `#` are comments):
//!
//! ```text
//! nodes N
//! x y            (N lines)
//! elements M
//! i j curve      (M lines, zero-based node indices)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Self::CounterClockwise => Self::Clockwise,
            Self::Clockwise => Self::CounterClockwise,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Element {
    pub nodes: [usize; 2],
    pub curve: usize,
}

/// Straight element data derived from the node coordinates.
#[derive(Clone, Copy, Debug)]
pub struct ElementGeometry {
    pub p0: Point,
    pub p1: Point,
    pub length: f64,
    pub tangent: Point,
    pub normal: Point,
}

impl ElementGeometry {
    pub fn point(&self, s: f64) -> Point {
        [
            self.p0[0] + s * (self.p1[0] - self.p0[0]),
            self.p0[1] + s * (self.p1[1] - self.p0[1]),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryMesh {
    pub nodes: Vec<Point>,
    pub elements: Vec<Element>,
    /// One flag per closed curve, indexed by curve id.
    pub orientations: Vec<Orientation>,
}

fn mesh_err(msg: impl Into<String>) -> Error {
    Error::Mesh(msg.into())
}

impl BoundaryMesh {
    /// Builds and validates a mesh. Curve ids must be `0..orientations.len()`.
    pub fn new(nodes: Vec<Point>, elements: Vec<Element>, orientations: Vec<Orientation>) -> Result<Self> {
        let mesh = Self {
            nodes,
            elements,
            orientations,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Mesh with orientation flags inferred from the signed area of each curve.
    pub fn with_inferred_orientation(nodes: Vec<Point>, elements: Vec<Element>) -> Result<Self> {
        let n_curves = elements.iter().map(|e| e.curve + 1).max().unwrap_or(0);
        let mut mesh = Self {
            nodes,
            elements,
            orientations: vec![Orientation::CounterClockwise; n_curves],
        };
        for c in 0..n_curves {
            if mesh.signed_area(c) < 0.0 {
                mesh.orientations[c] = Orientation::Clockwise;
            }
        }
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_curves(&self) -> usize {
        self.orientations.len()
    }

    pub fn geometry(&self, e: usize) -> ElementGeometry {
        let [i, j] = self.elements[e].nodes;
        let (p0, p1) = (self.nodes[i], self.nodes[j]);
        let d = [p1[0] - p0[0], p1[1] - p0[1]];
        let length = d[0].hypot(d[1]);
        let tangent = [d[0] / length, d[1] / length];
        ElementGeometry {
            p0,
            p1,
            length,
            tangent,
            normal: [tangent[1], -tangent[0]],
        }
    }

    pub fn total_length(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.geometry(e).length).sum()
    }

    /// Largest element length.
    pub fn mesh_size(&self) -> f64 {
        (0..self.n_elements())
            .map(|e| self.geometry(e).length)
            .fold(0.0, f64::max)
    }

    /// Shoelace area of one curve; positive for counter-clockwise traversal.
    pub fn signed_area(&self, curve: usize) -> f64 {
        0.5 * self
            .elements
            .iter()
            .filter(|e| e.curve == curve)
            .map(|e| {
                let (p, q) = (self.nodes[e.nodes[0]], self.nodes[e.nodes[1]]);
                p[0] * q[1] - q[0] * p[1]
            })
            .sum::<f64>()
    }

    /// Checks that every curve is a single non-degenerate cycle and that its
    /// orientation flag matches its traversal direction.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(mesh_err("non-finite node coordinates"));
        }
        if self.elements.is_empty() {
            return Err(mesh_err("mesh has no elements"));
        }
        let nn = self.n_nodes();
        let mut next = vec![usize::MAX; nn];
        let mut indeg = vec![0usize; nn];
        for (k, e) in self.elements.iter().enumerate() {
            let [i, j] = e.nodes;
            if i >= nn || j >= nn {
                return Err(mesh_err(format!("element {k} references a missing node")));
            }
            if e.curve >= self.n_curves() {
                return Err(mesh_err(format!("element {k} has unknown curve id {}", e.curve)));
            }
            if self.geometry(k).length <= 0.0 {
                return Err(mesh_err(format!("element {k} has zero length")));
            }
            if next[i] != usize::MAX {
                return Err(mesh_err(format!("node {i} starts two elements")));
            }
            next[i] = k;
            indeg[j] += 1;
        }
        if indeg.iter().any(|&d| d > 1) {
            return Err(mesh_err("a node ends two elements; curve is not a simple cycle"));
        }
        for c in 0..self.n_curves() {
            let members: Vec<usize> = (0..self.n_elements())
                .filter(|&k| self.elements[k].curve == c)
                .collect();
            if members.len() < 3 {
                return Err(mesh_err(format!("curve {c} has fewer than 3 elements")));
            }
            // walk the cycle from the first element
            let start = members[0];
            let mut k = start;
            let mut steps = 0;
            loop {
                let j = self.elements[k].nodes[1];
                let nk = next[j];
                if nk == usize::MAX || self.elements[nk].curve != c {
                    return Err(mesh_err(format!("curve {c} is not closed")));
                }
                steps += 1;
                k = nk;
                if k == start {
                    break;
                }
                if steps > members.len() {
                    return Err(mesh_err(format!("curve {c} is not a single cycle")));
                }
            }
            if steps != members.len() {
                return Err(mesh_err(format!("curve {c} splits into several cycles")));
            }
            let ccw = self.signed_area(c) > 0.0;
            let flag = self.orientations[c] == Orientation::CounterClockwise;
            if ccw != flag {
                return Err(mesh_err(format!(
                    "orientation flag of curve {c} is inconsistent with its traversal"
                )));
            }
        }
        Ok(())
    }

    /// Same curves traversed backwards: normals flip, nodes keep their indices.
    pub fn reversed(&self) -> Self {
        Self {
            nodes: self.nodes.clone(),
            elements: self
                .elements
                .iter()
                .map(|e| Element {
                    nodes: [e.nodes[1], e.nodes[0]],
                    curve: e.curve,
                })
                .collect(),
            orientations: self.orientations.iter().map(|o| o.flipped()).collect(),
        }
    }

    /// Disjoint union; `other`'s nodes and curves are numbered after `self`'s.
    pub fn union(&self, other: &BoundaryMesh) -> Self {
        let off_n = self.n_nodes();
        let off_c = self.n_curves();
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes);
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().map(|e| Element {
            nodes: [e.nodes[0] + off_n, e.nodes[1] + off_n],
            curve: e.curve + off_c,
        }));
        let mut orientations = self.orientations.clone();
        orientations.extend_from_slice(&other.orientations);
        Self {
            nodes,
            elements,
            orientations,
        }
    }

    /// Smallest distance between the segments of two meshes; zero when
    /// they cross or touch.
    pub fn min_distance(&self, other: &BoundaryMesh) -> f64 {
        let mut best = f64::INFINITY;
        for e in 0..self.n_elements() {
            let g = self.geometry(e);
            for f in 0..other.n_elements() {
                best = best.min(segment_distance(&g, &other.geometry(f)));
            }
        }
        best
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# boundary mesh: {} curve(s)", self.n_curves());
        let _ = writeln!(s, "nodes {}", self.n_nodes());
        for p in &self.nodes {
            let _ = writeln!(s, "{:.17e} {:.17e}", p[0], p[1]);
        }
        let _ = writeln!(s, "elements {}", self.n_elements());
        for e in &self.elements {
            let _ = writeln!(s, "{} {} {}", e.nodes[0], e.nodes[1], e.curve);
        }
        s
    }

    /// Parses the text format; orientation flags are inferred.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = |line: Option<&str>, key: &str| -> Result<usize> {
            let line = line.ok_or_else(|| mesh_err(format!("missing '{key}' header")))?;
            let mut it = line.split_whitespace();
            if it.next() != Some(key) {
                return Err(mesh_err(format!("expected '{key} <count>', got '{line}'")));
            }
            it.next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| mesh_err(format!("bad count in '{line}'")))
        };
        let n = header(lines.next(), "nodes")?;
        let mut nodes = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| mesh_err("too few node lines"))?;
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| mesh_err(format!("bad node line '{line}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 2 {
                return Err(mesh_err(format!("node line needs 2 values: '{line}'")));
            }
            nodes.push([v[0], v[1]]);
        }
        let m = header(lines.next(), "elements")?;
        let mut elements = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| mesh_err("too few element lines"))?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| mesh_err(format!("bad element line '{line}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 3 {
                return Err(mesh_err(format!("element line needs 3 integers: '{line}'")));
            }
            elements.push(Element {
                nodes: [v[0], v[1]],
                curve: v[2],
            });
        }
        if let Some(extra) = lines.next() {
            return Err(mesh_err(format!("unexpected trailing line '{extra}'")));
        }
        Self::with_inferred_orientation(nodes, elements)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn point_segment_distance(p: Point, g: &ElementGeometry) -> f64 {
    let d = [g.p1[0] - g.p0[0], g.p1[1] - g.p0[1]];
    let t = (((p[0] - g.p0[0]) * d[0] + (p[1] - g.p0[1]) * d[1]) / (g.length * g.length))
        .clamp(0.0, 1.0);
    let q = g.point(t);
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn segment_distance(g: &ElementGeometry, h: &ElementGeometry) -> f64 {
    let cross = |o: Point, a: Point, b: Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let d1 = cross(h.p0, h.p1, g.p0);
    let d2 = cross(h.p0, h.p1, g.p1);
    let d3 = cross(g.p0, g.p1, h.p0);
    let d4 = cross(g.p0, g.p1, h.p1);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(g.p0, h)
        .min(point_segment_distance(g.p1, h))
        .min(point_segment_distance(h.p0, g))
        .min(point_segment_distance(h.p1, g))
}

fn closed_polyline(points: Vec<Point>) -> Result<BoundaryMesh> {
    let n = points.len();
    let elements = (0..n)
        .map(|i| Element {
            nodes: [i, (i + 1) % n],
            curve: 0,
        })
        .collect();
    BoundaryMesh::new(points, elements, vec![Orientation::CounterClockwise])
}

/// Regular polygon with `n_elems` nodes on the circle, counter-clockwise.
pub fn make_circle(n_elems: usize, radius: f64, center: Point) -> Result<BoundaryMesh> {
    if n_elems < 3 || !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: format!("circle needs n >= 3 and radius > 0, got n = {n_elems}, r = {radius}"),
        });
    }
    let pts = (0..n_elems)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n_elems as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect();
    closed_polyline(pts)
}

/// Axis-aligned square with nodes at the corners, counter-clockwise.
pub fn make_square(n_per_side: usize, side: f64, center: Point) -> Result<BoundaryMesh> {
    if n_per_side < 1 || !(side > 0.0 && side.is_finite()) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: format!("square needs n_per_side >= 1 and side > 0, got {n_per_side}, {side}"),
        });
    }
    let h = 0.5 * side;
    let corners = [
        [center[0] - h, center[1] - h],
        [center[0] + h, center[1] - h],
        [center[0] + h, center[1] + h],
        [center[0] - h, center[1] + h],
    ];
    let mut pts = Vec::with_capacity(4 * n_per_side);
    for c in 0..4 {
        let (p, q) = (corners[c], corners[(c + 1) % 4]);
        for k in 0..n_per_side {
            let t = k as f64 / n_per_side as f64;
            pts.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    closed_polyline(pts)
}

/// Two disjoint concentric circles: `Ω₁` inside the inner one, `Ω₀` between
/// them, `Ω₂` outside the outer one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeDomainPreset {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub n_inner: usize,
    pub n_outer: usize,
    pub center: Point,
}

impl ThreeDomainPreset {
    pub fn annulus(n_per_curve: usize) -> Self {
        Self {
            inner_radius: 0.5,
            outer_radius: 1.0,
            n_inner: n_per_curve,
            n_outer: n_per_curve,
            center: [0.0, 0.0],
        }
    }
}

/// `(Γ₁, Γ₂)`, both counter-clockwise.
pub fn make_three_domain(preset: &ThreeDomainPreset) -> Result<(BoundaryMesh, BoundaryMesh)> {
    if !(preset.inner_radius < preset.outer_radius) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: format!(
                "inner radius {} must be smaller than outer radius {}",
                preset.inner_radius, preset.outer_radius
            ),
        });
    }
    let g1 = make_circle(preset.n_inner, preset.inner_radius, preset.center)?;
    let g2 = make_circle(preset.n_outer, preset.outer_radius, preset.center)?;
    if !(g1.min_distance(&g2) > 0.0) {
        return Err(Error::Geometry {
            module: "bem2d",
            reason: "interface curves intersect".into(),
        });
    }
    Ok((g1, g2))
}
