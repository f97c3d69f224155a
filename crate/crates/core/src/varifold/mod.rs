//! Unit-density varifold of a polygonal network: weight, first variation,
//! their mollified versions and the smoothed mean curvature field.

mod field;

use std::io::Write;

use crate::geometry::{LabeledNetwork, PointGrid, Vec2};
use crate::kernels::{quad::gauss_rule, KernelSuite};

pub use field::{
    mean_curvature_gradient_bound_check, operator_norm, smoothed_mean_curvature, CurvatureField,
    GradientReport,
};

/// Vertex stars with `|T(v)|` below this are treated as balanced.
pub const ACTIVE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
    pub length: f64,
    pub tangent: Vec2,
}

/// Segments of a network with per-vertex sums of outward unit tangents.
#[derive(Clone, Debug)]
pub struct DiscreteVarifold {
    segments: Vec<Segment>,
    vertices: Vec<Vec2>,
    stars: Vec<Vec2>,
    degrees: Vec<usize>,
    active: Vec<usize>,
}

impl DiscreteVarifold {
    pub fn from_network(net: &LabeledNetwork) -> Self {
        let vertices = net.vertices().to_vec();
        let mut stars = vec![Vec2::zeros(); vertices.len()];
        let mut degrees = vec![0; vertices.len()];
        let segments = net
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (a, b) = net.segment(i);
                let length = (b - a).norm();
                let tangent = (b - a) / length;
                stars[e.tail] += tangent;
                stars[e.head] -= tangent;
                degrees[e.tail] += 1;
                degrees[e.head] += 1;
                Segment {
                    a,
                    b,
                    length,
                    tangent,
                }
            })
            .collect();
        let active = (0..vertices.len())
            .filter(|&v| stars[v].norm() > ACTIVE_THRESHOLD)
            .collect();
        Self {
            segments,
            vertices,
            stars,
            degrees,
            active,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// `T(v)`, the sum of unit tangents leaving `v`.
    pub fn star(&self, v: usize) -> Vec2 {
        self.stars[v]
    }

    pub fn stars(&self) -> &[Vec2] {
        &self.stars
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// Vertices with unbalanced stars; only these carry first variation.
    pub fn active_vertices(&self) -> &[usize] {
        &self.active
    }

    /// `delta V(g) = int div_S g d||V|| = -sum_v T(v) . g(v)`.
    pub fn first_variation<G: Fn(Vec2) -> Vec2>(&self, g: G) -> f64 {
        -self
            .active
            .iter()
            .map(|&v| self.stars[v].dot(&g(self.vertices[v])))
            .sum::<f64>()
    }

    pub fn mass(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Gauss points carrying the weight measure: 3-point rules on panels no
    /// longer than `panel`.
    pub fn mass_points(&self, panel: f64) -> Vec<(Vec2, f64)> {
        let rule = gauss_rule(3);
        let mut out = Vec::new();
        for s in &self.segments {
            let n = (s.length / panel).ceil().max(1.0) as usize;
            let h = s.length / n as f64;
            for p in 0..n {
                let c = (p as f64 + 0.5) * h;
                for (x, w) in rule {
                    out.push((s.a + s.tangent * (c + 0.5 * h * x), 0.5 * h * w));
                }
            }
        }
        out
    }

    /// Grid over the active vertices.
    pub fn active_grid(&self, cell: f64) -> PointGrid {
        PointGrid::new(cell, self.active.iter().map(|&v| (v, self.vertices[v])))
    }
}

/// `(Phi_eps * delta V)(y) = -sum_v Phi_eps(v - y) T(v)`.
pub fn smoothed_first_variation(dv: &DiscreteVarifold, suite: &KernelSuite, y: Vec2) -> Vec2 {
    let mut out = Vec2::zeros();
    for &v in dv.active_vertices() {
        let p = dv.vertices[v];
        if (p - y).norm() < suite.support_radius() {
            out -= dv.stars[v] * suite.phi(p - y);
        }
    }
    out
}

/// `(Phi_eps * ||V||)(y)` by Gauss quadrature along each segment with
/// node spacing at most `eps / 4`.
pub fn smoothed_weight(dv: &DiscreteVarifold, suite: &KernelSuite, y: Vec2) -> f64 {
    let r = suite.support_radius();
    let panel = 0.75 * suite.eps();
    let rule = gauss_rule(3);
    let mut out = 0.0;
    for s in &dv.segments {
        if crate::geometry::point_segment_distance(y, s.a, s.b) >= r {
            continue;
        }
        let n = (s.length / panel).ceil().max(1.0) as usize;
        let h = s.length / n as f64;
        for p in 0..n {
            let c = (p as f64 + 0.5) * h;
            for (x, w) in rule {
                out += 0.5 * h * w * suite.phi(s.a + s.tangent * (c + 0.5 * h * x) - y);
            }
        }
    }
    out
}

/// Writes `x,y,hx,hy,|h|` rows.
pub fn write_h_samples<W: Write>(mut out: W, points: &[Vec2], h: &[Vec2]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["x", "y", "hx", "hy", "|h|"])?;
    for (p, v) in points.iter().zip(h) {
        w.write_record(&[
            format!("{:.12e}", p.x),
            format!("{:.12e}", p.y),
            format!("{:.12e}", v.x),
            format!("{:.12e}", v.y),
            format!("{:.12e}", v.norm()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
