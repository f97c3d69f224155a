use rayon::prelude::*;

use crate::geometry::{LabeledNetwork, Vec2};
use crate::kernels::quad::gauss_rule;
use crate::kernels::{KernelSuite, WeightOmega};
use crate::stepper::Frame;
use crate::varifold::{CurvatureField, DiscreteVarifold};

/// Quadrature of one network against `h_eps`: three Gauss points per
/// edge, with the unit tangent and left normal of the carrying edge.
#[derive(Clone, Debug)]
pub struct FrameSample {
    pub t: f64,
    pub k: usize,
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    pub tangents: Vec<Vec2>,
    pub edges: Vec<usize>,
    pub h: Vec<Vec2>,
    /// `h_eps` at the network vertices.
    pub h_vertices: Vec<Vec2>,
}

impl FrameSample {
    pub fn new(frame: &Frame, suite: &KernelSuite, w: &WeightOmega, quad_factor: f64) -> Self {
        let net = &frame.net;
        let (points, weights, tangents, edges) = edge_quadrature(net);
        let (h, h_vertices) = if net.edges().is_empty() {
            (Vec::new(), vec![Vec2::zeros(); net.vertices().len()])
        } else {
            let field =
                CurvatureField::new(DiscreteVarifold::from_network(net), *suite, *w, quad_factor);
            (
                field.eval_unchecked(&points),
                field.eval_unchecked(net.vertices()),
            )
        };
        Self {
            t: frame.t,
            k: frame.k,
            points,
            weights,
            tangents,
            edges,
            h,
            h_vertices,
        }
    }

    /// `sum w f(x, h, tangent)` over the quadrature points.
    pub fn integrate(&self, f: impl Fn(Vec2, Vec2, Vec2) -> f64) -> f64 {
        (0..self.points.len())
            .map(|q| self.weights[q] * f(self.points[q], self.h[q], self.tangents[q]))
            .sum()
    }

    pub fn mass(&self, phi: impl Fn(Vec2) -> f64) -> f64 {
        (0..self.points.len())
            .map(|q| self.weights[q] * phi(self.points[q]))
            .sum()
    }
}

pub fn edge_quadrature(net: &LabeledNetwork) -> (Vec<Vec2>, Vec<f64>, Vec<Vec2>, Vec<usize>) {
    let rule = gauss_rule(3);
    let m = net.edges().len() * rule.len();
    let (mut p, mut w, mut t, mut e) = (
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
    );
    for id in 0..net.edges().len() {
        let (a, b) = net.segment(id);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let tau = (b - a) / len;
        for &(x, wt) in rule {
            p.push(a + (b - a) * (0.5 * (x + 1.0)));
            w.push(0.5 * len * wt);
            t.push(tau);
            e.push(id);
        }
    }
    (p, w, t, e)
}

/// Samples every frame in parallel.
pub fn sample_frames(
    frames: &[Frame],
    suite: &KernelSuite,
    w: &WeightOmega,
    quad_factor: f64,
) -> Vec<FrameSample> {
    frames
        .par_iter()
        .map(|f| FrameSample::new(f, suite, w, quad_factor))
        .collect()
}
