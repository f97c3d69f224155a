use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admissible::{check_admissible_with, AdmissibilityReport};
use super::builder::NetBuilder;
use super::moves::{enumerate_moves, DeformationMove, MoveKind, VRef};
use crate::error::NetworkError;
use crate::geometry::{segment_distance, validate, BBox, Edge, LabeledNetwork, SegmentGrid, Vec2};
use crate::kernels::WeightOmega;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppliedMove {
    pub kind: MoveKind,
    pub anchor: usize,
    pub variant: usize,
    pub support: [f64; 4],
    pub drop: f64,
    pub report: AdmissibilityReport,
}

/// Lower estimate of `Delta_j ||V||(C)` realized by a set of disjoint
/// admissible moves.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DeltaVcEstimate {
    pub drop: f64,
    pub moves: Vec<AppliedMove>,
    pub max_volume_delta: f64,
    pub volume_budget: f64,
    /// Moves dropped because the combined result failed validation.
    pub rolled_back: usize,
}

/// Applies the moves' edge surgery in order.
pub fn apply_moves(
    net: &LabeledNetwork,
    moves: &[&DeformationMove],
) -> Result<LabeledNetwork, NetworkError> {
    let mut b = NetBuilder::from_network(net);
    for mv in moves {
        let ids: Vec<usize> = mv.new_vertices.iter().map(|&p| b.add_vertex(p)).collect();
        let resolve = |r: VRef| match r {
            VRef::Old(v) => v,
            VRef::New(k) => ids[k],
        };
        for &e in &mv.removed_edges {
            b.remove_edge(e);
        }
        for e in &mv.added_edges {
            b.add_edge(Edge::new(resolve(e.tail), resolve(e.head), e.left, e.right));
        }
    }
    b.build()
}

pub fn apply_best_moves(
    net: &LabeledNetwork,
    j: u32,
    w: &WeightOmega,
) -> (LabeledNetwork, DeltaVcEstimate) {
    apply_best_moves_within(net, j, w, None)
}

/// Greedy selection of pairwise disjoint admissible moves by mass drop,
/// optionally restricted to moves supported inside `region`.
pub fn apply_best_moves_within(
    net: &LabeledNetwork,
    j: u32,
    w: &WeightOmega,
    region: Option<&BBox>,
) -> (LabeledNetwork, DeltaVcEstimate) {
    let n = net.edges().len();
    if n == 0 {
        return (net.clone(), DeltaVcEstimate::default());
    }
    let grid = edge_grid(net);
    let scale = net.total_length().max(1e-300);
    let mut cands: Vec<(DeformationMove, AdmissibilityReport)> = enumerate_moves(net, j, w)
        .into_par_iter()
        .filter(|m| m.drop() > 1e-12 * scale)
        .filter(|m| region.map_or(true, |r| r.contains_box(&m.support)))
        .filter_map(|m| {
            let rep = check_admissible_with(net, Some(&grid), &m, j, w);
            rep.admissible().then_some((m, rep))
        })
        .collect();
    cands.sort_by(|(a, _), (b, _)| {
        b.drop()
            .partial_cmp(&a.drop())
            .unwrap()
            .then(a.kind.cmp(&b.kind))
            .then(a.anchor.cmp(&b.anchor))
            .then(a.variant.cmp(&b.variant))
    });

    let tau = net.tau_geom();
    let mut taken_edges = vec![false; n];
    let mut boxes: Vec<BBox> = Vec::new();
    let mut accepted: Vec<usize> = Vec::new();
    for (i, (mv, _)) in cands.iter().enumerate() {
        if mv.removed_edges.iter().any(|&e| taken_edges[e])
            || boxes.iter().any(|b| b.intersects(&mv.support))
        {
            continue;
        }
        if !locally_embedded(net, &grid, mv, tau) {
            continue;
        }
        for &e in &mv.removed_edges {
            taken_edges[e] = true;
        }
        boxes.push(mv.support);
        accepted.push(i);
    }

    let chosen: Vec<&DeformationMove> = accepted.iter().map(|&i| &cands[i].0).collect();
    let mut rolled_back = 0;
    let (out, kept) = match apply_moves(net, &chosen) {
        Ok(o) if validate(&o).is_empty() => (o, accepted),
        _ => {
            log::warn!(
                "combined surgery of {} moves failed validation; applying one at a time",
                accepted.len()
            );
            let mut kept: Vec<usize> = Vec::new();
            let mut cur = net.clone();
            for &i in &accepted {
                let mut trial: Vec<&DeformationMove> = kept.iter().map(|&k| &cands[k].0).collect();
                trial.push(&cands[i].0);
                match apply_moves(net, &trial) {
                    Ok(o) if validate(&o).is_empty() => {
                        cur = o;
                        kept.push(i);
                    }
                    _ => rolled_back += 1,
                }
            }
            (cur, kept)
        }
    };

    let mut est = DeltaVcEstimate {
        rolled_back,
        ..Default::default()
    };
    for &i in &kept {
        let (mv, rep) = &cands[i];
        est.drop += mv.drop();
        est.max_volume_delta = est.max_volume_delta.max(rep.max_volume_delta);
        est.volume_budget += rep.volume_budget;
        est.moves.push(AppliedMove {
            kind: mv.kind,
            anchor: mv.anchor,
            variant: mv.variant,
            support: [
                mv.support.min.x,
                mv.support.min.y,
                mv.support.max.x,
                mv.support.max.y,
            ],
            drop: mv.drop(),
            report: *rep,
        });
    }
    (out, est)
}

fn edge_grid(net: &LabeledNetwork) -> SegmentGrid {
    let n = net.edges().len();
    let mean = net.total_length() / n as f64;
    SegmentGrid::new(
        (2.0 * mean).max(1e-9),
        (0..n).map(|e| {
            let (a, b) = net.segment(e);
            (e, a, b)
        }),
    )
}

/// New segments must not touch surviving edges or each other except at
/// shared endpoints.
fn locally_embedded(
    net: &LabeledNetwork,
    grid: &SegmentGrid,
    mv: &DeformationMove,
    tau: f64,
) -> bool {
    let segs = mv.new_segments(net);
    for (k, ne) in mv.added_edges.iter().enumerate() {
        let (a, b) = segs[k];
        let bx = BBox::of_points([a, b]).unwrap().expanded(tau);
        for f in grid.query_box(&bx) {
            if mv.removed_edges.binary_search(&f).is_ok() {
                continue;
            }
            let fe = net.edge(f);
            let (c, d) = net.segment(f);
            let shared = [ne.tail, ne.head]
                .into_iter()
                .find(|r| matches!(r, VRef::Old(v) if *v == fe.tail || *v == fe.head));
            if conflict(a, b, c, d, shared.map(|r| mv.point(net, r)), tau) {
                return false;
            }
        }
        for (l, other) in mv.added_edges.iter().enumerate().skip(k + 1) {
            let (c, d) = segs[l];
            let shared = [ne.tail, ne.head]
                .into_iter()
                .find(|r| *r == other.tail || *r == other.head);
            if conflict(a, b, c, d, shared.map(|r| mv.point(net, r)), tau) {
                return false;
            }
        }
    }
    true
}

fn conflict(a: Vec2, b: Vec2, c: Vec2, d: Vec2, shared: Option<Vec2>, tau: f64) -> bool {
    match shared {
        None => segment_distance(a, b, c, d) <= tau,
        Some(p) => {
            let far1 = if (a - p).norm() < (b - p).norm() {
                b
            } else {
                a
            };
            let far2 = if (c - p).norm() < (d - p).norm() {
                d
            } else {
                c
            };
            crate::geometry::point_segment_distance(far1, c, d) <= tau
                || crate::geometry::point_segment_distance(far2, a, b) <= tau
        }
    }
}
