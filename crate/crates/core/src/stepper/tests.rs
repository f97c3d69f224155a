use std::f64::consts::PI;

use super::*;
use crate::geometry::{grain_area, validate, Edge};

pub(crate) fn circle(n: usize, r: f64) -> LabeledNetwork {
    let v = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            Vec2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    let e = (0..n)
        .map(|k| Edge::new(k, (k + 1) % n, Label(1), Label(2)))
        .collect();
    LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap()
}

fn radius(net: &LabeledNetwork) -> f64 {
    (grain_area(net, Label(1)).unwrap() / PI).sqrt()
}

#[test]
fn dyadic_steps() {
    assert_eq!(dyadic_floor(4e-4), 2f64.powi(-12));
    assert_eq!(dyadic_floor(0.25), 0.25);
    assert_eq!(dyadic_floor(0.3), 0.25);
    assert_eq!(dyadic_floor(1e-4), 2f64.powi(-14));
}

#[test]
fn schedule_validation() {
    let w = WeightOmega::constant_one();
    let s = FlowSettings::default();
    let sched = EpochSchedule::new(&s, &w).unwrap();
    assert_eq!(sched.dt, 2f64.powi(-12));
    assert!(sched.dt <= s.eps.powf(s.kappa));
    assert_eq!(sched.h_res, 0.01);
    let bad = FlowSettings {
        kappa: 0.5,
        ..s.clone()
    };
    assert_eq!(
        EpochSchedule::new(&bad, &w).unwrap_err().path,
        "schedule.kappa"
    );
    let bad = FlowSettings {
        eps: 0.0,
        ..s.clone()
    };
    assert_eq!(EpochSchedule::new(&bad, &w).unwrap_err().path, "kernel.eps");
    let over = FlowSettings {
        dt: Some(1e-4),
        ..s.clone()
    };
    assert_eq!(EpochSchedule::new(&over, &w).unwrap().dt, 2f64.powi(-14));
    let expo = WeightOmega::exponential(WEIGHT_GRID);
    let bad = FlowSettings {
        j: 1,
        weight: WeightVariant::Exponential,
        ..s
    };
    assert_eq!(
        EpochSchedule::new(&bad, &expo).unwrap_err().path,
        "schedule.j"
    );
}

#[test]
fn zero_horizon_keeps_initial_frame_only() {
    let net = circle(64, 0.5);
    let traj = run(
        net.clone(),
        &FlowSettings {
            t_end: 0.0,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(traj.frames.len(), 1);
    assert!(traj.records.is_empty());
    assert_eq!(traj.frames[0].net, net);
    assert_eq!(traj.termination, Some(Termination::Completed));
}

#[test]
fn circle_epoch_shrinks_radius_by_dt_over_r() {
    let net = circle(256, 0.5);
    let s = FlowSettings {
        dt: Some(1e-4),
        ..Default::default()
    };
    let w = s.weight();
    let sched = EpochSchedule::new(&s, &w).unwrap();
    let suite = KernelSuite::new(s.eps).unwrap();
    let (next, rec) = advance_epoch(&FlowState::new(net.clone()), &sched, &suite, &w).unwrap();
    let dr = radius(&net) - radius(&next.net);
    let expect = rec.dt / 0.5;
    assert!(
        (dr - expect).abs() <= 0.1 * expect,
        "dr = {dr}, expected {expect}"
    );
    assert!(validate(&next.net).is_empty());
    assert_eq!(rec.moves.len(), 0);
    assert!(rec.dissipation.pass);
    assert!(rec.max_h <= rec.h_bound && rec.max_grad_h <= rec.grad_bound);
    // Flux matches the area change to first order.
    let g = rec.grains[0];
    let da = g.area - grain_area(&net, Label(1)).unwrap();
    assert!((da - g.flux).abs() <= 0.02 * da.abs(), "{da} vs {}", g.flux);
}

fn split_box(half: f64, n_side: usize) -> LabeledNetwork {
    // Square split by the x axis: grain 1 above, grain 2 below, exterior 3.
    let mut v = Vec::new();
    let mut e = Vec::new();
    let mut chain =
        |pts: Vec<Vec2>, left: Label, right: Label, v: &mut Vec<Vec2>, ends: (usize, usize)| {
            let mut prev = ends.0;
            for p in &pts[1..pts.len() - 1] {
                v.push(*p);
                e.push(Edge::new(prev, v.len() - 1, left, right));
                prev = v.len() - 1;
            }
            e.push(Edge::new(prev, ends.1, left, right));
        };
    let corners = [
        Vec2::new(-half, -half),
        Vec2::new(half, -half),
        Vec2::new(half, 0.0),
        Vec2::new(half, half),
        Vec2::new(-half, half),
        Vec2::new(-half, 0.0),
    ];
    v.extend(corners);
    let line = |a: Vec2, b: Vec2, n: usize| {
        (0..=n)
            .map(|k| a + (b - a) * (k as f64 / n as f64))
            .collect::<Vec<_>>()
    };
    let (a, b, c) = (Label(1), Label(2), Label(3));
    chain(
        line(corners[0], corners[1], 2 * n_side),
        b,
        c,
        &mut v,
        (0, 1),
    );
    chain(line(corners[1], corners[2], n_side), b, c, &mut v, (1, 2));
    chain(line(corners[2], corners[3], n_side), a, c, &mut v, (2, 3));
    chain(
        line(corners[3], corners[4], 2 * n_side),
        a,
        c,
        &mut v,
        (3, 4),
    );
    chain(line(corners[4], corners[5], n_side), a, c, &mut v, (4, 5));
    chain(line(corners[5], corners[0], n_side), b, c, &mut v, (5, 0));
    chain(
        line(corners[5], corners[2], 2 * n_side),
        a,
        b,
        &mut v,
        (5, 2),
    );
    LabeledNetwork::new(v, e, 3, c, 0.0).unwrap()
}

#[test]
fn flat_interface_is_stationary() {
    let net = split_box(1.0, 100);
    assert!(validate(&net).is_empty());
    let s = FlowSettings::default();
    let w = s.weight();
    let sched = EpochSchedule::new(&s, &w).unwrap();
    let suite = KernelSuite::new(s.eps).unwrap();
    let (next, rec) = advance_epoch(&FlowState::new(net.clone()), &sched, &suite, &w).unwrap();
    assert_eq!(rec.resample.splits + rec.resample.merges, 0);
    let tol = 1e-6 * rec.dt / (s.eps * s.eps);
    for (p, q) in net.vertices().iter().zip(next.net.vertices()) {
        if p.y.abs() < 1e-12 && p.x.abs() < 0.5 {
            assert!((p - q).norm() <= tol, "{p:?} moved to {q:?}");
        }
    }
}

#[test]
fn interior_edge_is_removed_first() {
    // Grain 1 with a dangling interior edge.
    let mut net = circle(128, 0.4);
    let mut v = net.vertices().to_vec();
    let mut e = net.edges().to_vec();
    v.push(Vec2::new(0.2, 0.0));
    e.push(Edge::new(0, v.len() - 1, Label(1), Label(1)));
    net = LabeledNetwork::new(v, e, 2, Label(2), 0.0).unwrap();
    assert!(validate(&net).is_empty());
    let s = FlowSettings {
        h_res: Some(1.0),
        ..Default::default()
    };
    let w = s.weight();
    let sched = EpochSchedule::new(&s, &w).unwrap();
    let suite = KernelSuite::new(s.eps).unwrap();
    let (next, rec) = advance_epoch(&FlowState::new(net.clone()), &sched, &suite, &w).unwrap();
    assert!(!rec.moves.is_empty());
    assert!((rec.drop - 0.2).abs() < 1e-12);
    assert!(next.net.edges().iter().all(|e| !e.is_interior()));
    assert!(rec.mass_after < rec.mass_before);
}
