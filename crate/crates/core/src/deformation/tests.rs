use proptest::prelude::*;

use super::*;
use crate::geometry::{
    grain_area, random_partition, total_mass, validate, BBox, Edge, Label, LabeledNetwork, Vec2,
};
use crate::kernels::WeightOmega;

fn lshape_with_interior(ell: f64) -> LabeledNetwork {
    // Unit square split by a vertical edge x = 0.5 whose lower part of
    // length ell separates grain 1 from itself.
    let v = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(0.5, 0.0),
        Vec2::new(0.5, ell),
    ];
    let e = vec![
        Edge::new(0, 4, Label(1), Label(2)),
        Edge::new(4, 1, Label(1), Label(2)),
        Edge::new(1, 2, Label(1), Label(2)),
        Edge::new(2, 3, Label(1), Label(2)),
        Edge::new(3, 0, Label(1), Label(2)),
        Edge::new(4, 5, Label(1), Label(1)),
    ];
    LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap()
}

#[test]
fn interior_edge_removal_drops_its_length() {
    let net = lshape_with_interior(0.3);
    assert!(validate(&net).is_empty());
    let w = WeightOmega::constant_one();
    let moves = enumerate_moves(&net, 10, &w);
    let rm = moves
        .iter()
        .find(|m| m.kind == MoveKind::RemoveInteriorEdge)
        .unwrap();
    let rep = check_admissible(&net, rm, 10, &w);
    assert!(rep.admissible());
    assert_eq!(rep.max_volume_delta, 0.0);
    assert!(rep.mass_drop > 0.0);
    let (out, est) = apply_best_moves(&net, 10, &w);
    assert!((est.drop - 0.3).abs() < 1e-15);
    assert_eq!(out.edges().len(), 5);
}

#[test]
fn network_without_candidates_is_unchanged() {
    let v = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    let e = (0..4)
        .map(|k| Edge::new(k, (k + 1) % 4, Label(1), Label(2)))
        .collect();
    let net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
    let w = WeightOmega::constant_one();
    assert!(enumerate_moves(&net, 10, &w).is_empty());
    let (out, est) = apply_best_moves(&net, 10, &w);
    assert_eq!(out, net);
    assert_eq!(est.drop, 0.0);
}

fn two_tiny_triangles(gap: f64) -> LabeledNetwork {
    let s = 0.005;
    let hgt = s * 3f64.sqrt() / 2.0;
    let mut v = Vec::new();
    let mut e = Vec::new();
    for (g, x0) in [(1u32, 0.0), (2u32, gap)] {
        let b = v.len();
        v.extend([
            Vec2::new(x0, 0.0),
            Vec2::new(x0 + s, 0.0),
            Vec2::new(x0 + s / 2.0, hgt),
        ]);
        for k in 0..3 {
            e.push(Edge::new(b + k, b + (k + 1) % 3, Label(g), Label(3)));
        }
    }
    LabeledNetwork::new(v, e, 3, Label(3), 0.0).unwrap()
}

#[test]
fn disjoint_moves_add_up() {
    let net = two_tiny_triangles(1.0);
    let w = WeightOmega::constant_one();
    let single: Vec<f64> = [Label(1), Label(2)]
        .iter()
        .map(|&l| {
            let mv = enumerate_moves(&net, 10, &w)
                .into_iter()
                .find(|m| m.kind == MoveKind::VanishSmallGrain && m.volume_deltas[0].0 == l)
                .unwrap();
            assert!((mv.volume_deltas[0].1 - grain_area(&net, l).unwrap()).abs() < 1e-18);
            mv.drop()
        })
        .collect();
    let (out, est) = apply_best_moves(&net, 10, &w);
    assert_eq!(est.moves.len(), 2);
    assert!((est.drop - single.iter().sum::<f64>()).abs() < 1e-15);
    assert!(out.edges().is_empty());
}

#[test]
fn larger_region_finds_at_least_as_much() {
    let net = two_tiny_triangles(0.5);
    let w = WeightOmega::constant_one();
    let boxes = [
        BBox::new(Vec2::new(-0.01, -0.01), Vec2::new(0.01, 0.01)),
        BBox::new(Vec2::new(-0.01, -0.01), Vec2::new(0.3, 0.3)),
        BBox::new(Vec2::new(-0.01, -0.01), Vec2::new(0.51, 0.01)),
        BBox::new(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)),
    ];
    let drops: Vec<f64> = boxes
        .iter()
        .map(|b| apply_best_moves_within(&net, 10, &w, Some(b)).1.drop)
        .collect();
    for k in 1..drops.len() {
        assert!(drops[k] >= drops[k - 1] - 1e-15, "{drops:?}");
    }
    assert!(drops[0] > 0.0);
    assert!(drops[3] > drops[0]);
}

#[test]
fn generator_yields_valid_networks() {
    for seed in 0..200 {
        let net = random_partition(seed);
        assert!(
            validate(&net).is_empty(),
            "seed {seed}: {:?}",
            validate(&net)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn applied_moves_are_certified(seed in any::<u64>(), j in prop::sample::select(vec![2u32, 3, 5, 10]), expo in any::<bool>()) {
        let net = random_partition(seed);
        prop_assume!(validate(&net).is_empty());
        let w = if expo { WeightOmega::exponential(51) } else { WeightOmega::constant_one() };
        let (out, est) = apply_best_moves(&net, j, &w);
        prop_assert!(validate(&out).is_empty());
        prop_assert!(est.drop >= 0.0);
        let m0 = total_mass(&net, &w);
        let m1 = total_mass(&out, &w);
        prop_assert!(m1 <= m0 + 1e-13 * m0);
        prop_assert!(((m0 - m1) - est.drop).abs() <= 1e-11 * m0);
        let jf = j as f64;
        for mv in &est.moves {
            let r = &mv.report;
            prop_assert!(r.displacement <= 1.0 / (jf * jf));
            prop_assert!(r.max_volume_delta <= r.mass_drop / jf * (1.0 + 1e-12));
            prop_assert!(r.mass_in_support_after <= (-jf * r.support_diameter).exp() * r.mass_in_support_before * (1.0 + 1e-12));
        }
        // Aggregate volume control.
        let total: f64 = net
            .bounded_labels()
            .filter_map(|l| Some((grain_area(&net, l).ok()? - grain_area(&out, l).unwrap_or(0.0)).abs()))
            .sum();
        prop_assert!(total <= net.n_grains() as f64 * est.drop / jf + 1e-12);
    }
}
