use serde::{Deserialize, Serialize};

use super::moves::DeformationMove;
use crate::geometry::{clip_length_box, mass_in_box, LabeledNetwork, SegmentGrid};
use crate::kernels::WeightOmega;

/// The numbers behind each admissibility condition for one move.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub displacement: f64,
    pub displacement_bound: f64,
    pub max_volume_delta: f64,
    pub volume_budget: f64,
    pub mass_drop: f64,
    pub support_diameter: f64,
    pub mass_in_support_before: f64,
    pub mass_in_support_after: f64,
    pub decay_factor: f64,
    /// `sup |f(x) - x| <= 1/j^2`.
    pub cond_a: bool,
    /// Every grain moves at most `(mass drop) / j` in area.
    pub cond_b: bool,
    /// Mass inside the support shrinks by `exp(-j diam C)`.
    pub cond_d: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.cond_a && self.cond_b && self.cond_d
    }
}

pub fn check_admissible(
    net: &LabeledNetwork,
    mv: &DeformationMove,
    j: u32,
    w: &WeightOmega,
) -> AdmissibilityReport {
    check_admissible_with(net, None, mv, j, w)
}

/// As [`check_admissible`], with an optional grid over the network edges.
pub fn check_admissible_with(
    net: &LabeledNetwork,
    grid: Option<&SegmentGrid>,
    mv: &DeformationMove,
    j: u32,
    w: &WeightOmega,
) -> AdmissibilityReport {
    let jf = j as f64;
    let displacement_bound = 1.0 / (jf * jf);
    let mass_drop = mv
        .removed_edges
        .iter()
        .map(|&e| {
            let (a, b) = net.segment(e);
            w.segment_integral(a, b)
        })
        .sum::<f64>()
        - mv.new_segments(net)
            .iter()
            .map(|(a, b)| w.segment_integral(*a, *b))
            .sum::<f64>();
    let volume_budget = mass_drop.max(0.0) / jf;
    let max_volume_delta = mv.max_volume_delta();

    let c = &mv.support;
    let before = mass_in_box(net, grid, c);
    let removed: f64 = mv
        .removed_edges
        .iter()
        .map(|&e| {
            let (a, b) = net.segment(e);
            clip_length_box(a, b, c)
        })
        .sum();
    let added: f64 = mv
        .new_segments(net)
        .iter()
        .map(|(a, b)| clip_length_box(*a, *b, c))
        .sum();
    let after = (before - removed + added).max(0.0);
    let diam = c.diameter();
    let decay_factor = (-jf * diam).exp();

    let tol = 1e-12;
    AdmissibilityReport {
        displacement: mv.displacement,
        displacement_bound,
        max_volume_delta,
        volume_budget,
        mass_drop,
        support_diameter: diam,
        mass_in_support_before: before,
        mass_in_support_after: after,
        decay_factor,
        cond_a: mv.displacement <= displacement_bound,
        cond_b: max_volume_delta <= volume_budget * (1.0 + tol),
        cond_d: after <= decay_factor * before + tol * before,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{enumerate_moves, MoveKind};
    use crate::geometry::{Edge, Label, Vec2};

    #[test]
    fn identity_is_admissible() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        let e = vec![
            Edge::new(0, 1, Label(1), Label(2)),
            Edge::new(1, 2, Label(1), Label(2)),
            Edge::new(2, 0, Label(1), Label(2)),
        ];
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        let w = WeightOmega::constant_one();
        let rep = check_admissible(&net, &DeformationMove::identity(), 10, &w);
        assert!(rep.admissible());
        assert_eq!(rep.mass_drop, 0.0);
    }

    #[test]
    fn tiny_triangle_vanishes_admissibly() {
        let s = 0.005;
        let h = s * 3f64.sqrt() / 2.0;
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(s, 0.0),
            Vec2::new(s / 2.0, h),
        ];
        let e = vec![
            Edge::new(0, 1, Label(1), Label(2)),
            Edge::new(1, 2, Label(1), Label(2)),
            Edge::new(2, 0, Label(1), Label(2)),
        ];
        let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
        let w = WeightOmega::constant_one();
        let moves = enumerate_moves(&net, 10, &w);
        let mv = moves
            .iter()
            .find(|m| m.kind == MoveKind::VanishSmallGrain)
            .unwrap();
        assert!(mv.added_edges.is_empty());
        assert!((mv.drop() - 3.0 * s).abs() < 1e-15);
        let rep = check_admissible(&net, mv, 10, &w);
        assert!(rep.cond_a && rep.cond_b && rep.cond_d, "{rep:?}");
        let area = 3f64.sqrt() / 4.0 * s * s;
        assert!((rep.max_volume_delta - area).abs() < 1e-18);
        assert!(rep.max_volume_delta <= rep.volume_budget);
        assert_eq!(rep.mass_in_support_after, 0.0);
    }
}
