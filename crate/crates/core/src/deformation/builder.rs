use crate::error::NetworkError;
use crate::geometry::{Edge, LabeledNetwork, Vec2};

/// Mutable scratch copy of a network. Edges are removed by id and appended
/// at the end; `build` drops vertices left without edges and renumbers.
#[derive(Clone, Debug)]
pub struct NetBuilder {
    vertices: Vec<Vec2>,
    edges: Vec<Option<Edge>>,
    n_grains: u32,
    exterior: crate::geometry::Label,
    time: f64,
}

impl NetBuilder {
    pub fn from_network(net: &LabeledNetwork) -> Self {
        Self {
            vertices: net.vertices().to_vec(),
            edges: net.edges().iter().copied().map(Some).collect(),
            n_grains: net.n_grains(),
            exterior: net.exterior(),
            time: net.time(),
        }
    }

    pub fn vertex(&self, v: usize) -> Vec2 {
        self.vertices[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn add_vertex(&mut self, p: Vec2) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    pub fn set_vertex(&mut self, v: usize, p: Vec2) {
        self.vertices[v] = p;
    }

    pub fn edge(&self, e: usize) -> Option<&Edge> {
        self.edges[e].as_ref()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Removes an edge; returns it if it was still present.
    pub fn remove_edge(&mut self, e: usize) -> Option<Edge> {
        self.edges[e].take()
    }

    pub fn add_edge(&mut self, e: Edge) -> usize {
        self.edges.push(Some(e));
        self.edges.len() - 1
    }

    pub fn live_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (i, e)))
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn build(&self) -> Result<LabeledNetwork, NetworkError> {
        let mut used = vec![false; self.vertices.len()];
        for (_, e) in self.live_edges() {
            used[e.tail] = true;
            used[e.head] = true;
        }
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (v, p) in self.vertices.iter().enumerate() {
            if used[v] {
                map[v] = vertices.len();
                vertices.push(*p);
            }
        }
        let edges = self
            .live_edges()
            .map(|(_, e)| Edge {
                tail: map[e.tail],
                head: map[e.head],
                ..*e
            })
            .collect();
        LabeledNetwork::new(vertices, edges, self.n_grains, self.exterior, self.time)
    }
}
