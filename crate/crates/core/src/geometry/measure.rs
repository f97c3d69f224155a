use super::{
    clip_length_box, clip_length_disc, cross, right_normal, BBox, Label, LabeledNetwork,
    SegmentGrid, Vec2,
};
use crate::error::GeometryError;
use crate::kernels::WeightOmega;

/// Area of a bounded grain from the signed shoelace sum over its oriented
/// boundary edges (grain on the left).
pub fn grain_area(net: &LabeledNetwork, label: Label) -> Result<f64, GeometryError> {
    if net.is_exterior(label) {
        return Err(GeometryError::InfiniteArea(label));
    }
    let mut origin: Option<Vec2> = None;
    let mut balance = vec![0i32; net.vertices().len()];
    let mut sum = 0.0;
    let mut scale = 0.0f64;
    for e in net.edges() {
        if e.is_interior() || !e.touches(label) {
            continue;
        }
        let (tail, head) = if e.left == label {
            (e.tail, e.head)
        } else {
            (e.head, e.tail)
        };
        let o = *origin.get_or_insert(net.vertex(tail));
        let a = net.vertex(tail) - o;
        let b = net.vertex(head) - o;
        sum += cross(a, b);
        scale += a.norm() * b.norm();
        balance[tail] += 1;
        balance[head] -= 1;
    }
    if origin.is_none() {
        return Err(GeometryError::EmptyGrain(label));
    }
    if let Some(v) = balance.iter().position(|&b| b != 0) {
        return Err(GeometryError::OpenBoundary { label, vertex: v });
    }
    let area = 0.5 * sum;
    if area < -1e-12 * scale.max(1e-300) {
        return Err(GeometryError::NegativeOrientation { label, area });
    }
    Ok(area.max(0.0))
}

/// Signed shoelace area of every bounded grain, in label order. Unlike
/// [`grain_area`] this never fails, so it can measure networks that are
/// transiently invalid.
pub fn signed_areas(net: &LabeledNetwork) -> Vec<(Label, f64)> {
    let o = net.vertices().first().copied().unwrap_or_else(Vec2::zeros);
    let mut sums: Vec<f64> = vec![0.0; net.n_grains() as usize + 1];
    for e in net.edges() {
        if e.is_interior() {
            continue;
        }
        let c = 0.5 * cross(net.vertex(e.tail) - o, net.vertex(e.head) - o);
        sums[e.left.0 as usize] += c;
        sums[e.right.0 as usize] -= c;
    }
    net.bounded_labels()
        .map(|l| (l, sums[l.0 as usize]))
        .collect()
}

/// Weighted boundary mass `sum_e int_e Omega dH^1`, interior edges included.
pub fn total_mass(net: &LabeledNetwork, w: &WeightOmega) -> f64 {
    (0..net.edges().len())
        .map(|e| {
            let (a, b) = net.segment(e);
            w.segment_integral(a, b)
        })
        .sum()
}

/// A reduced-boundary edge of one grain with the grain's outer normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub edge: usize,
    pub normal: Vec2,
    pub length: f64,
}

/// Edges separating `label` from a different grain. The normal points away
/// from `label`; on an edge shared by grains i and j the two normals are
/// opposite.
pub fn reduced_boundary(net: &LabeledNetwork, label: Label) -> Vec<BoundaryEdge> {
    net.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_interior() && e.touches(label))
        .map(|(i, e)| {
            let t = net.edge_tangent(i);
            let n = right_normal(t);
            let normal = if e.left == label { n } else { -n };
            BoundaryEdge {
                edge: i,
                normal,
                length: net.edge_length(i),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrainSummary {
    pub label: Label,
    /// `f64::INFINITY` for the exterior grain, 0 for an extinct grain.
    pub area: f64,
    pub perimeter: f64,
    pub extinct: bool,
}

/// Area and reduced-boundary length of every grain.
pub fn grain_summaries(net: &LabeledNetwork) -> Result<Vec<GrainSummary>, GeometryError> {
    net.labels()
        .map(|label| {
            let perimeter: f64 = reduced_boundary(net, label).iter().map(|b| b.length).sum();
            let (area, extinct) = match grain_area(net, label) {
                Ok(a) => (a, false),
                Err(GeometryError::InfiniteArea(_)) => (f64::INFINITY, false),
                Err(GeometryError::EmptyGrain(_)) => (0.0, true),
                Err(e) => return Err(e),
            };
            Ok(GrainSummary {
                label,
                area,
                perimeter,
                extinct,
            })
        })
        .collect()
}

/// Unweighted boundary length inside the closed disc `B_r(center)`.
pub fn mass_in_ball(net: &LabeledNetwork, grid: Option<&SegmentGrid>, center: Vec2, r: f64) -> f64 {
    let sum = |ids: &mut dyn Iterator<Item = usize>| -> f64 {
        ids.map(|e| {
            let (a, b) = net.segment(e);
            clip_length_disc(a, b, center, r)
        })
        .sum()
    };
    match grid {
        Some(g) => sum(&mut g.query_disc(center, r).into_iter()),
        None => sum(&mut (0..net.edges().len())),
    }
}

/// Unweighted boundary length inside a closed box.
pub fn mass_in_box(net: &LabeledNetwork, grid: Option<&SegmentGrid>, bx: &BBox) -> f64 {
    let ids: Vec<usize> = match grid {
        Some(g) => g.query_box(bx),
        None => (0..net.edges().len()).collect(),
    };
    ids.into_iter()
        .map(|e| {
            let (a, b) = net.segment(e);
            clip_length_box(a, b, bx)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Edge;

    pub(crate) fn square() -> LabeledNetwork {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let (i, x) = (Label(1), Label(2));
        let e = (0..4).map(|k| Edge::new(k, (k + 1) % 4, i, x)).collect();
        LabeledNetwork::new(v, e, 2, x, 0.0).unwrap()
    }

    fn ngon(n: usize, r: f64) -> LabeledNetwork {
        let v = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                Vec2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let e = (0..n)
            .map(|k| Edge::new(k, (k + 1) % n, Label(1), Label(2)))
            .collect();
        LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap()
    }

    /// Independent oracle: fan of triangles from the centroid of the vertex list.
    fn fan_area(pts: &[Vec2]) -> f64 {
        let c = pts.iter().fold(Vec2::zeros(), |s, p| s + p) / pts.len() as f64;
        let mut s = 0.0;
        for k in 0..pts.len() {
            let a = pts[k] - c;
            let b = pts[(k + 1) % pts.len()] - c;
            s += 0.5 * (a.x * b.y - a.y * b.x);
        }
        s.abs()
    }

    #[test]
    fn unit_square_area() {
        assert_eq!(grain_area(&square(), Label(1)).unwrap(), 1.0);
    }

    #[test]
    fn regular_64gon_area() {
        let net = ngon(64, 1.0);
        let a = grain_area(&net, Label(1)).unwrap();
        let closed = 32.0 * (std::f64::consts::TAU / 64.0).sin();
        assert!((a - 3.13654849).abs() < 1e-8);
        assert!((a - closed).abs() < 1e-12);
        assert!((a - fan_area(net.vertices())).abs() < 1e-12);
    }

    #[test]
    fn exterior_and_empty_grains() {
        let net = square();
        assert_eq!(
            grain_area(&net, Label(2)),
            Err(GeometryError::InfiniteArea(Label(2)))
        );
        let empty = LabeledNetwork::new(net.vertices().to_vec(), vec![], 3, Label(3), 0.0).unwrap();
        assert_eq!(
            grain_area(&empty, Label(1)),
            Err(GeometryError::EmptyGrain(Label(1)))
        );
    }

    #[test]
    fn open_boundary_is_a_topology_error() {
        let net = square();
        let mut edges = net.edges().to_vec();
        edges.pop();
        let open = LabeledNetwork::new(net.vertices().to_vec(), edges, 2, Label(2), 0.0).unwrap();
        assert!(matches!(
            grain_area(&open, Label(1)),
            Err(GeometryError::OpenBoundary { .. })
        ));
    }

    #[test]
    fn mass_of_polygon_perimeter() {
        let net = ngon(256, 1.0);
        let m = total_mass(&net, &WeightOmega::constant_one());
        assert!((m - 256.0 * 2.0 * (std::f64::consts::PI / 256.0).sin()).abs() < 1e-12);
        assert!((m - 6.28308).abs() < 1e-4);
        assert_eq!(m, net.total_length());
    }

    #[test]
    fn reduced_boundary_normals_point_out_of_disc() {
        let net = ngon(32, 1.0);
        let rb = reduced_boundary(&net, Label(1));
        assert_eq!(rb.len(), 32);
        for b in &rb {
            let m = net.edge_midpoint(b.edge);
            assert!(b.normal.dot(&m) > 0.0);
        }
        let outer = reduced_boundary(&net, Label(2));
        for (p, q) in rb.iter().zip(&outer) {
            assert!((p.normal + q.normal).norm() < 1e-15);
        }
    }

    #[test]
    fn interior_edges_are_not_reduced_boundary() {
        let net = square();
        let mut v = net.vertices().to_vec();
        v.push(Vec2::new(0.5, 0.5));
        let mut e = net.edges().to_vec();
        e.push(Edge::new(0, 4, Label(1), Label(1)));
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        assert_eq!(reduced_boundary(&net, Label(1)).len(), 4);
        assert_eq!(net.interior_edge_ids(), vec![4]);
        assert_eq!(grain_area(&net, Label(1)).unwrap(), 1.0);
        let m = total_mass(&net, &WeightOmega::constant_one());
        assert!((m - (4.0 + 0.5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn ball_and_box_masses() {
        let net = square();
        let m = mass_in_ball(&net, None, Vec2::new(0.5, 0.0), 0.25);
        assert!((m - 0.5).abs() < 1e-14);
        let bx = BBox::new(Vec2::new(-0.5, -0.5), Vec2::new(0.5, 0.5));
        assert!((mass_in_box(&net, None, &bx) - 1.0).abs() < 1e-14);
    }
}
