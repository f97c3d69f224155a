use serde::{Deserialize, Serialize};

use crate::deformation::{
    apply_moves, check_admissible, vanish_grain, AdmissibilityReport, NetBuilder,
};
use crate::geometry::{grain_area, validate, Edge, Label, LabeledNetwork, Violation};
use crate::kernels::WeightOmega;

/// One topology repair, certified like a deformation move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryRecord {
    pub label: Label,
    pub reason: String,
    pub report: AdmissibilityReport,
    /// Set when the repair is not admissible at the current `j`.
    pub flagged: bool,
}

const MAX_REPAIRS: usize = 64;

/// Restores validity after advection by dissolving the smallest grain
/// involved in each defect into its dominant neighbour. Degenerate edges
/// are contracted first.
pub fn repair(
    net: LabeledNetwork,
    j: u32,
    w: &WeightOmega,
) -> Result<(LabeledNetwork, Vec<SurgeryRecord>), String> {
    let mut net = net;
    let mut records = Vec::new();
    for _ in 0..MAX_REPAIRS {
        let viol = validate(&net);
        if viol.is_empty() {
            return Ok((net, records));
        }
        if let Some(Violation::DegenerateEdge { edge }) = viol.first() {
            net = contract_edge(&net, *edge)?;
            continue;
        }
        if matches!(viol.first(), Some(Violation::IsolatedVertex { .. })) {
            net = NetBuilder::from_network(&net)
                .build()
                .map_err(|e| e.to_string())?;
            continue;
        }
        let mut labels: Vec<Label> = Vec::new();
        let push = |l: Label, labels: &mut Vec<Label>| {
            if !net.is_exterior(l) && !labels.contains(&l) {
                labels.push(l);
            }
        };
        for v in &viol {
            match v {
                Violation::SelfIntersection { a, b } => {
                    for e in [*a, *b] {
                        push(net.edge(e).left, &mut labels);
                        push(net.edge(e).right, &mut labels);
                    }
                }
                Violation::LabelMismatch { vertex } => {
                    for e in net
                        .edges()
                        .iter()
                        .filter(|e| e.tail == *vertex || e.head == *vertex)
                    {
                        push(e.left, &mut labels);
                        push(e.right, &mut labels);
                    }
                }
                Violation::NonPositiveArea { label, .. }
                | Violation::OpenBoundary { label, .. } => push(*label, &mut labels),
                _ => {}
            }
        }
        let size = |l: Label| match grain_area(&net, l) {
            Ok(a) => a.abs(),
            Err(_) => 0.0,
        };
        labels.sort_by(|a, b| size(*a).partial_cmp(&size(*b)).unwrap().then(a.cmp(b)));
        let Some(&target) = labels.first() else {
            return Err(format!("cannot repair: {}", viol[0]));
        };
        let mv = vanish_grain(&net, target, w)
            .ok_or_else(|| format!("cannot dissolve grain {target}"))?;
        let report = check_admissible(&net, &mv, j, w);
        net = apply_moves(&net, &[&mv]).map_err(|e| e.to_string())?;
        records.push(SurgeryRecord {
            label: target,
            reason: viol[0].to_string(),
            flagged: !report.admissible(),
            report,
        });
    }
    Err(format!("no valid network after {MAX_REPAIRS} repairs"))
}

fn contract_edge(net: &LabeledNetwork, e: usize) -> Result<LabeledNetwork, String> {
    let ed = *net.edge(e);
    let mid = (net.vertex(ed.tail) + net.vertex(ed.head)) * 0.5;
    let mut b = NetBuilder::from_network(net);
    b.set_vertex(ed.tail, mid);
    b.remove_edge(e);
    for f in 0..net.edges().len() {
        let fe = *net.edge(f);
        if f == e || (fe.tail != ed.head && fe.head != ed.head) {
            continue;
        }
        b.remove_edge(f);
        let moved = Edge {
            tail: if fe.tail == ed.head { ed.tail } else { fe.tail },
            head: if fe.head == ed.head { ed.tail } else { fe.head },
            ..fe
        };
        if moved.tail != moved.head {
            b.add_edge(moved);
        }
    }
    b.build().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    #[test]
    fn inverted_small_grain_is_dissolved() {
        // Grain 2 is a triangle inside grain 1 whose orientation got flipped.
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.5, 0.51),
            Vec2::new(0.51, 0.5),
        ];
        let mut e: Vec<Edge> = (0..4)
            .map(|k| Edge::new(k, (k + 1) % 4, Label(1), Label(3)))
            .collect();
        for k in 0..3 {
            e.push(Edge::new(4 + k, 4 + (k + 1) % 3, Label(2), Label(1)));
        }
        let net = LabeledNetwork::new(v, e, 3, Label(3), 0.0).unwrap();
        assert!(!validate(&net).is_empty());
        let (out, rec) = repair(net, 10, &WeightOmega::constant_one()).unwrap();
        assert!(validate(&out).is_empty());
        assert_eq!(rec.len(), 1);
        assert_eq!(rec[0].label, Label(2));
        assert_eq!(out.edges().len(), 4);
    }

    #[test]
    fn valid_network_passes_through() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        let e = (0..3)
            .map(|k| Edge::new(k, (k + 1) % 3, Label(1), Label(2)))
            .collect();
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        let (out, rec) = repair(net.clone(), 10, &WeightOmega::constant_one()).unwrap();
        assert_eq!(out, net);
        assert!(rec.is_empty());
    }
}
