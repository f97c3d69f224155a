use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BBox, Vec2};
use crate::error::NetworkError;

/// Grain label, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A grain label together with its exterior flag, as handed out by
/// [`LabeledNetwork::grains`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrainLabel {
    pub index: Label,
    pub is_exterior: bool,
}

/// Straight boundary segment. Travelling from `tail` to `head`, grain
/// `left` lies on the left and grain `right` on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub left: Label,
    pub right: Label,
}

impl Edge {
    pub fn new(tail: usize, head: usize, left: Label, right: Label) -> Self {
        Self {
            tail,
            head,
            left,
            right,
        }
    }

    /// Same grain on both sides: part of the boundary but not of any
    /// reduced boundary.
    pub fn is_interior(&self) -> bool {
        self.left == self.right
    }

    pub fn touches(&self, label: Label) -> bool {
        self.left == label || self.right == label
    }

    pub fn other_end(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            tail: self.head,
            head: self.tail,
            left: self.right,
            right: self.left,
        }
    }
}

/// An edge seen from one of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub edge: usize,
    /// `true` when the edge leaves the vertex (vertex is the tail).
    pub outgoing: bool,
}

/// Labeled planar partition: polygonal boundary network whose edges carry
/// the grain labels on either side. Instances are immutable snapshots;
/// every modification builds a new network.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledNetwork {
    vertices: Vec<Vec2>,
    edges: Vec<Edge>,
    n_grains: u32,
    exterior: Label,
    time: f64,
}

impl LabeledNetwork {
    /// Builds a network after checking indices and labels. Geometric and
    /// topological invariants are checked separately by
    /// [`crate::geometry::validate`].
    pub fn new(
        vertices: Vec<Vec2>,
        edges: Vec<Edge>,
        n_grains: u32,
        exterior: Label,
        time: f64,
    ) -> Result<Self, NetworkError> {
        if n_grains < 2 {
            return Err(NetworkError::TooFewGrains(n_grains));
        }
        if exterior.0 == 0 || exterior.0 > n_grains {
            return Err(NetworkError::LabelOutOfRange(exterior));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(NetworkError::VertexOutOfRange { edge: i });
            }
            if e.tail == e.head {
                return Err(NetworkError::LoopEdge { edge: i });
            }
            for l in [e.left, e.right] {
                if l.0 == 0 || l.0 > n_grains {
                    return Err(NetworkError::LabelOutOfRange(l));
                }
            }
        }
        if vertices
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(NetworkError::NonFinite);
        }
        Ok(Self {
            vertices,
            edges,
            n_grains,
            exterior,
            time,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> Vec2 {
        self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn n_grains(&self) -> u32 {
        self.n_grains
    }

    pub fn exterior(&self) -> Label {
        self.exterior
    }

    pub fn is_exterior(&self, l: Label) -> bool {
        l == self.exterior
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (1..=self.n_grains).map(Label)
    }

    pub fn bounded_labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.labels().filter(move |l| *l != self.exterior)
    }

    pub fn grains(&self) -> impl Iterator<Item = GrainLabel> + '_ {
        self.labels().map(move |l| GrainLabel {
            index: l,
            is_exterior: l == self.exterior,
        })
    }

    /// Replaces vertex positions, keeping connectivity.
    pub fn with_positions(&self, positions: Vec<Vec2>) -> Self {
        assert_eq!(positions.len(), self.vertices.len());
        Self {
            vertices: positions,
            ..self.clone()
        }
    }

    pub fn segment(&self, e: usize) -> (Vec2, Vec2) {
        let ed = &self.edges[e];
        (self.vertices[ed.tail], self.vertices[ed.head])
    }

    pub fn edge_vector(&self, e: usize) -> Vec2 {
        let (a, b) = self.segment(e);
        b - a
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_vector(e).norm()
    }

    pub fn edge_tangent(&self, e: usize) -> Vec2 {
        let d = self.edge_vector(e);
        d / d.norm()
    }

    pub fn edge_midpoint(&self, e: usize) -> Vec2 {
        let (a, b) = self.segment(e);
        (a + b) * 0.5
    }

    pub fn interior_edge_ids(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].is_interior())
            .collect()
    }

    pub fn total_length(&self) -> f64 {
        (0..self.edges.len()).map(|e| self.edge_length(e)).sum()
    }

    /// Bounding box of the vertices; `None` for an empty network.
    pub fn bbox(&self) -> Option<BBox> {
        BBox::of_points(self.vertices.iter().copied())
    }

    pub fn diameter(&self) -> f64 {
        self.bbox().map(|b| b.diameter()).unwrap_or(0.0)
    }

    /// Geometric tolerance used for intersection and validity checks.
    pub fn tau_geom(&self) -> f64 {
        let d = self.diameter();
        if d > 0.0 {
            1e-9 * d
        } else {
            1e-12
        }
    }

    /// Incident half-edges of every vertex, sorted counter-clockwise by the
    /// direction in which they leave the vertex.
    pub fn stars(&self) -> Vec<Vec<HalfEdge>> {
        let mut stars = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            stars[e.tail].push(HalfEdge {
                edge: i,
                outgoing: true,
            });
            stars[e.head].push(HalfEdge {
                edge: i,
                outgoing: false,
            });
        }
        for (v, star) in stars.iter_mut().enumerate() {
            let p = self.vertices[v];
            star.sort_by(|a, b| {
                let da = self.half_edge_direction(p, *a);
                let db = self.half_edge_direction(p, *b);
                da.y.atan2(da.x)
                    .partial_cmp(&db.y.atan2(db.x))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.edge.cmp(&b.edge))
            });
        }
        stars
    }

    fn half_edge_direction(&self, from: Vec2, h: HalfEdge) -> Vec2 {
        let e = &self.edges[h.edge];
        let to = if h.outgoing { e.head } else { e.tail };
        self.vertices[to] - from
    }

    /// Unit vector leaving vertex `v` along edge `e`.
    pub fn outward_tangent(&self, v: usize, e: usize) -> Vec2 {
        let ed = &self.edges[e];
        let d = self.vertices[ed.other_end(v)] - self.vertices[v];
        d / d.norm()
    }

    /// Grain on the counter-clockwise side of a half-edge leaving its vertex.
    pub fn ccw_label(&self, h: HalfEdge) -> Label {
        let e = &self.edges[h.edge];
        if h.outgoing {
            e.left
        } else {
            e.right
        }
    }

    /// Grain on the clockwise side of a half-edge leaving its vertex.
    pub fn cw_label(&self, h: HalfEdge) -> Label {
        let e = &self.edges[h.edge];
        if h.outgoing {
            e.right
        } else {
            e.left
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }
}
