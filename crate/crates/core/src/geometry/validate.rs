use std::fmt;

use super::{
    cross, grain_area, point_segment_distance, segment_distance, Label, LabeledNetwork, SegmentGrid,
};
use crate::error::GeometryError;

/// A broken invariant of a labeled network.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    DegenerateEdge { edge: usize },
    IsolatedVertex { vertex: usize },
    SelfIntersection { a: usize, b: usize },
    LabelMismatch { vertex: usize },
    OpenBoundary { label: Label, vertex: usize },
    ExteriorNotOuter { found: Label },
    NonPositiveArea { label: Label, area: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateEdge { edge } => write!(f, "edge {edge} has zero length"),
            Violation::IsolatedVertex { vertex } => write!(f, "vertex {vertex} has no edges"),
            Violation::SelfIntersection { a, b } => write!(f, "edges {a} and {b} intersect"),
            Violation::LabelMismatch { vertex } => {
                write!(f, "grain labels do not match around vertex {vertex}")
            }
            Violation::OpenBoundary { label, vertex } => {
                write!(
                    f,
                    "boundary of grain {label} is not closed at vertex {vertex}"
                )
            }
            Violation::ExteriorNotOuter { found } => {
                write!(
                    f,
                    "unbounded face carries label {found} instead of the exterior label"
                )
            }
            Violation::NonPositiveArea { label, area } => {
                write!(f, "grain {label} has non-positive area {area}")
            }
        }
    }
}

/// Checks every geometric and topological invariant. An empty result means
/// the network is a valid labeled partition.
pub fn validate(net: &LabeledNetwork) -> Vec<Violation> {
    let mut out = Vec::new();
    let tau = net.tau_geom();
    let n = net.edges().len();

    for e in 0..n {
        if net.edge_length(e) <= tau {
            out.push(Violation::DegenerateEdge { edge: e });
        }
    }
    let deg = net.degrees();
    for (v, d) in deg.iter().enumerate() {
        if *d == 0 {
            out.push(Violation::IsolatedVertex { vertex: v });
        }
    }
    if !out.is_empty() {
        return out;
    }

    out.extend(intersections(net, tau));

    let stars = net.stars();
    for (v, star) in stars.iter().enumerate() {
        let k = star.len();
        if (0..k).any(|i| net.ccw_label(star[i]) != net.cw_label(star[(i + 1) % k])) {
            out.push(Violation::LabelMismatch { vertex: v });
        }
    }

    if let Some(v) = (0..deg.len()).min_by(|&a, &b| {
        let (p, q) = (net.vertex(a), net.vertex(b));
        p.x.partial_cmp(&q.x)
            .unwrap()
            .then(p.y.partial_cmp(&q.y).unwrap())
    }) {
        let last = *stars[v].last().unwrap();
        let found = net.ccw_label(last);
        if found != net.exterior() {
            out.push(Violation::ExteriorNotOuter { found });
        }
    }

    for label in net.bounded_labels() {
        match grain_area(net, label) {
            Ok(a) if a <= 0.0 => out.push(Violation::NonPositiveArea { label, area: a }),
            Ok(_) | Err(GeometryError::EmptyGrain(_)) => {}
            Err(GeometryError::OpenBoundary { label, vertex }) => {
                out.push(Violation::OpenBoundary { label, vertex })
            }
            Err(GeometryError::NegativeOrientation { label, area }) => {
                out.push(Violation::NonPositiveArea { label, area })
            }
            Err(GeometryError::InfiniteArea(_)) => unreachable!(),
        }
    }
    out
}

/// Pairs of edges that cross, touch away from a shared endpoint, or overlap
/// along a shared endpoint.
fn intersections(net: &LabeledNetwork, tau: f64) -> Vec<Violation> {
    let n = net.edges().len();
    if n < 2 {
        return Vec::new();
    }
    let mean = net.total_length() / n as f64;
    let grid = SegmentGrid::new(
        2.0 * mean,
        (0..n).map(|e| {
            let (a, b) = net.segment(e);
            (e, a, b)
        }),
    );
    let mut out = Vec::new();
    for e in 0..n {
        let (a, b) = net.segment(e);
        let ed = net.edge(e);
        let bx = super::BBox::of_points([a, b]).unwrap().expanded(tau);
        for f in grid.query_box(&bx) {
            if f <= e {
                continue;
            }
            let fd = net.edge(f);
            let (c, d) = net.segment(f);
            let shared = [ed.tail, ed.head]
                .into_iter()
                .find(|v| *v == fd.tail || *v == fd.head);
            let bad = match shared {
                None => segment_distance(a, b, c, d) <= tau,
                Some(v) => {
                    if (ed.tail == fd.tail && ed.head == fd.head)
                        || (ed.tail == fd.head && ed.head == fd.tail)
                    {
                        true
                    } else {
                        // The far endpoints must stay off the other segment.
                        let p = net.vertex(ed.other_end(v));
                        let q = net.vertex(fd.other_end(v));
                        let o = net.vertex(v);
                        let colinear = cross(p - o, q - o).abs()
                            <= tau * (p - o).norm().max((q - o).norm())
                            && (p - o).dot(&(q - o)) > 0.0;
                        colinear
                            || point_segment_distance(p, c, d) <= tau
                            || point_segment_distance(q, a, b) <= tau
                    }
                }
            };
            if bad {
                out.push(Violation::SelfIntersection { a: e, b: f });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Edge, Vec2};

    fn square_net(labels: (u32, u32), extra: Option<Edge>) -> LabeledNetwork {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let mut e: Vec<Edge> = (0..4)
            .map(|k| Edge::new(k, (k + 1) % 4, Label(labels.0), Label(labels.1)))
            .collect();
        e.extend(extra);
        LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap()
    }

    #[test]
    fn valid_square() {
        assert!(validate(&square_net((1, 2), None)).is_empty());
    }

    #[test]
    fn reversed_labels_put_exterior_inside() {
        let v = validate(&square_net((2, 1), None));
        assert!(v.contains(&Violation::ExteriorNotOuter { found: Label(1) }));
    }

    #[test]
    fn crossing_diagonals_detected() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
        ];
        // Bow-tie polygon 0 -> 1 -> 2 -> 3 -> 0.
        let e = (0..4)
            .map(|k| Edge::new(k, (k + 1) % 4, Label(1), Label(2)))
            .collect();
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        let viol = validate(&net);
        assert!(viol
            .iter()
            .any(|x| matches!(x, Violation::SelfIntersection { .. })));
    }

    #[test]
    fn dangling_reduced_edge_is_a_label_mismatch() {
        let mut net = square_net((1, 2), None);
        let mut v = net.vertices().to_vec();
        v.push(Vec2::new(0.5, 0.5));
        let mut e = net.edges().to_vec();
        e.push(Edge::new(0, 4, Label(1), Label(2)));
        net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        let viol = validate(&net);
        assert!(viol.contains(&Violation::LabelMismatch { vertex: 4 }));
    }

    #[test]
    fn dangling_interior_edge_is_valid() {
        let mut v = square_net((1, 2), None).vertices().to_vec();
        v.push(Vec2::new(0.5, 0.5));
        let net = square_net((1, 2), None);
        let mut e = net.edges().to_vec();
        e.push(Edge::new(0, 4, Label(1), Label(1)));
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        assert!(validate(&net).is_empty());
    }

    #[test]
    fn overlapping_edges_at_shared_vertex() {
        let mut v = square_net((1, 2), None).vertices().to_vec();
        v.push(Vec2::new(0.5, 0.0));
        let net = square_net((1, 2), None);
        let mut e = net.edges().to_vec();
        e.push(Edge::new(0, 4, Label(1), Label(1)));
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        assert!(validate(&net)
            .iter()
            .any(|x| matches!(x, Violation::SelfIntersection { .. })));
    }

    #[test]
    fn isolated_vertex_flagged() {
        let mut v = square_net((1, 2), None).vertices().to_vec();
        v.push(Vec2::new(5.0, 5.0));
        let net = LabeledNetwork::new(
            v,
            square_net((1, 2), None).edges().to_vec(),
            2,
            Label(2),
            0.0,
        )
        .unwrap();
        assert_eq!(
            validate(&net),
            vec![Violation::IsolatedVertex { vertex: 4 }]
        );
    }
}
