use std::f64::consts::PI;

use super::*;
use crate::error::DiagnosticsError;
use crate::geometry::{Edge, Label, LabeledNetwork, Vec2};
use crate::io::{build_scenario, BoxedSpec, Scenario, TwoCirclesSpec};
use crate::kernels::{Bump, HeatKernelQuery};
use crate::stepper::{run, FlowSettings, Frame, Termination, Trajectory};

fn settings() -> FlowSettings {
    FlowSettings {
        eps: 0.02,
        ..Default::default()
    }
}

fn line_box() -> LabeledNetwork {
    let sc = Scenario::StraightLine(BoxedSpec {
        half_width: 1.0,
        spacing: Some(0.01),
    });
    build_scenario(&sc, 3, 0, 0.01).unwrap()
}

/// Frames of one unchanging network.
fn frozen(net: &LabeledNetwork, times: &[f64]) -> Trajectory {
    let frames = times
        .iter()
        .enumerate()
        .map(|(k, &t)| Frame {
            k,
            t,
            net: net.clone().with_time(t),
        })
        .collect();
    Trajectory {
        frames,
        termination: Some(Termination::Completed),
        ..Default::default()
    }
}

#[test]
fn stationary_line_brakke_residual_vanishes() {
    let traj = frozen(&line_box(), &[0.0, 1e-4, 2e-4]);
    let st = SampledTrajectory::new(&traj, &settings()).unwrap();
    let phi = Bump::new(Vec2::new(0.05, 0.0), 0.3, 1.0);
    let b = st.brakke_residual(&phi, 0.0, 2e-4, 0.1).unwrap();
    assert_eq!(b.lhs, 0.0);
    assert!(b.rhs.abs() < 1e-12, "{b:?}");
    assert!(b.pass);
    assert!(!b.deformed);
}

#[test]
fn stationary_line_volume_and_weak_form() {
    let traj = frozen(&line_box(), &[0.0, 1e-4, 2e-4]);
    let st = SampledTrajectory::new(&traj, &settings()).unwrap();
    let v = st
        .volume_identity_residual(Label(1), 0.0, 2e-4, 0.05)
        .unwrap();
    assert_eq!((v.dvol, v.flux, v.residual), (0.0, 0.0, 0.0));
    assert!(v.pass);
    let g = ShiftField::new(Vec2::new(0.1, 0.0), 0.4, Vec2::new(0.3, 1.0));
    let bv = st.bv_flow_checks(&g, 0.0, 2e-4).unwrap();
    assert!(bv.weak_residual.abs() < 1e-9 * bv.weak_scale, "{bv:?}");
    assert!(bv.reflection);
}

#[test]
fn static_line_huisken_lhs_is_zero() {
    let traj = frozen(&line_box(), &[0.0, 1e-4, 2e-4]);
    let st = SampledTrajectory::new(&traj, &settings()).unwrap();
    let (y, s, r) = (Vec2::new(0.1, 0.0), 0.01, 0.2);
    let h = st.huisken_residual(y, s, r, 0.0, 2e-4, 40.0, 0.0).unwrap();
    // Truncated Gaussian mass on the line, integrated along the line.
    let q = HeatKernelQuery::new(y, s, r, 0.0).unwrap();
    let line_mass = |t: f64| {
        quadrature::integrate(
            |x: f64| q.rho_hat(Vec2::new(x, 0.0), t).unwrap(),
            y.x - 2.0 * r,
            y.x + 2.0 * r,
            1e-13,
        )
        .integral
    };
    let oracle = line_mass(2e-4) - line_mass(0.0);
    assert!(oracle > 0.0);
    assert!(
        (h.lhs - oracle).abs() < 1e-5 * oracle,
        "{} vs {oracle}",
        h.lhs
    );
    assert!(h.rhs > h.lhs && h.pass);
    // A radius larger than the whole domain keeps both sides finite.
    let h = st
        .huisken_residual(Vec2::new(0.1, 0.0), 0.01, 5.0, 0.0, 2e-4, 40.0, 0.0)
        .unwrap();
    assert!(h.lhs.is_finite() && h.rhs.is_finite() && h.pass);
    assert!(matches!(
        st.huisken_residual(Vec2::zeros(), 1e-4, 0.2, 0.0, 2e-4, 40.0, 0.0),
        Err(DiagnosticsError::ReferenceTime { .. })
    ));
}

#[test]
fn argument_errors() {
    let traj = frozen(&line_box(), &[0.0, 1e-4]);
    let st = SampledTrajectory::new(&traj, &settings()).unwrap();
    let neg = Bump::new(Vec2::zeros(), 0.3, -1.0);
    assert!(matches!(
        st.brakke_residual(&neg, 0.0, 1e-4, 0.1),
        Err(DiagnosticsError::NegativeTestFunction { .. })
    ));
    let phi = Bump::new(Vec2::zeros(), 0.3, 1.0);
    assert!(matches!(
        st.brakke_residual(&phi, 1e-4, 0.0, 0.1),
        Err(DiagnosticsError::InvalidWindow { .. })
    ));
    assert!(matches!(
        st.brakke_residual(&phi, 0.0, 5e-5, 0.1),
        Err(DiagnosticsError::InvalidWindow { .. })
    ));
    assert!(matches!(
        st.volume_identity_residual(Label(3), 0.0, 1e-4, 0.05),
        Err(DiagnosticsError::ExteriorGrain(Label(3)))
    ));
    let empty = Trajectory::default();
    assert!(matches!(
        SampledTrajectory::new(&empty, &settings()),
        Err(DiagnosticsError::EmptyTrajectory)
    ));
}

#[test]
fn clearing_out_far_and_on_line() {
    let traj = frozen(&line_box(), &[0.0, 1e-4, 2e-4]);
    let st = SampledTrajectory::new(&traj, &settings()).unwrap();
    let r = 0.1;
    let far = st
        .clearing_out_check(Vec2::new(0.0, 0.6), 0.0, r, 0.01)
        .unwrap();
    assert_eq!(far.kernel_mass, 0.0);
    assert!(far.predicted);
    assert_eq!(far.outcome, Some(true));
    assert!(far.density_predicted);
    // On the line the Gaussian line integral is about one.
    let on = st
        .clearing_out_check(Vec2::new(0.0, 0.0), 0.0, r, 0.01)
        .unwrap();
    assert!((on.kernel_mass - 1.0).abs() < 1e-6, "{}", on.kernel_mass);
    assert!(!on.predicted);
    assert!(on.kernel_ok() && on.density_ok());
}

fn ray_star(angles_deg: &[f64]) -> LabeledNetwork {
    let mut v = vec![Vec2::zeros()];
    let mut e = Vec::new();
    let n = angles_deg.len();
    for (k, a) in angles_deg.iter().enumerate() {
        let a = a.to_radians();
        v.push(Vec2::new(a.cos(), a.sin()));
        e.push(Edge::new(
            0,
            k + 1,
            Label(k as u32 + 1),
            Label(((k + n - 1) % n) as u32 + 1),
        ));
    }
    LabeledNetwork::new(v, e, n as u32, Label(n as u32), 0.0).unwrap()
}

#[test]
fn density_oracles() {
    let r = 0.1;
    let line = LabeledNetwork::new(
        vec![Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)],
        vec![Edge::new(0, 1, Label(1), Label(2))],
        2,
        Label(2),
        0.0,
    )
    .unwrap();
    let d = density_report(&line, &[r], &[Vec2::new(0.3, 0.0)]);
    assert!((d.sup - 1.0).abs() < 1e-12);

    let star = ray_star(&[90.0, 210.0, 330.0]);
    let d = density_report(&star, &[r], &[Vec2::zeros()]);
    assert!((d.sup - 1.5).abs() < 1e-12);

    let gap = 1e-3;
    let two = LabeledNetwork::new(
        vec![
            Vec2::new(-1.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, gap),
            Vec2::new(-1.0, gap),
        ],
        vec![
            Edge::new(0, 1, Label(1), Label(2)),
            Edge::new(2, 3, Label(1), Label(2)),
        ],
        2,
        Label(2),
        0.0,
    )
    .unwrap();
    let d = density_report(&two, &[r], &[Vec2::new(0.0, 0.5 * gap)]);
    assert!((d.sup - 2.0).abs() < 1e-4, "{}", d.sup);
    assert!(!initial_density_check(&two, 0.05, 0.1).pass);
    assert!(initial_density_check(&star, 0.05, 0.1).pass);
}

#[test]
fn junction_angle_oracles() {
    let sc = Scenario::SteinerJunction(BoxedSpec {
        half_width: 1.0,
        spacing: Some(0.1),
    });
    let net = build_scenario(&sc, 4, 0, 0.1).unwrap();
    let js = junction_angles(&net);
    let center = js.iter().find(|j| j.position == [0.0, 0.0]).unwrap();
    for a in &center.angles {
        assert!((a - 120.0).abs() < 1e-9, "{a}");
    }
    // Box corners have degree 2 and are skipped; ray ends on the walls are
    // the other three junctions.
    assert_eq!(js.len(), 4);

    let db = build_scenario(&Scenario::by_name("double-bubble").unwrap(), 3, 0, 0.01).unwrap();
    let js = junction_angles(&db);
    assert_eq!(js.len(), 2);
    for a in js.iter().flat_map(|j| &j.angles) {
        assert!((a - 120.0).abs() < 1.0, "{a}");
    }
    let hist = angle_histogram(&js, 5.0);
    assert_eq!(hist.iter().map(|b| b.1).sum::<usize>(), 6);
    assert!(
        hist.iter().all(|b| (115.0..=120.0).contains(&b.0)),
        "{hist:?}"
    );
}

#[test]
fn extinction_bound_oracles() {
    let circle = build_scenario(&Scenario::by_name("circle").unwrap(), 2, 0, 0.01).unwrap();
    let e = extinction_report(&frozen(&circle, &[0.0]), 0.05).unwrap();
    assert!((e.bound - 0.125).abs() < 1e-4, "{}", e.bound);
    assert!(!e.extinct);

    let r0 = 0.2;
    let sc = Scenario::TwoCircles(TwoCirclesSpec {
        r0,
        separation: 1.0,
        segments: 512,
    });
    let two = build_scenario(&sc, 3, 0, 0.01).unwrap();
    let e = extinction_report(&frozen(&two, &[0.0]), 0.05).unwrap();
    // Each circle vanishes at r0^2 / 2, which the bound reproduces.
    assert!(
        (e.bound - r0 * r0 / 2.0).abs() < 1e-4 * r0 * r0,
        "{}",
        e.bound
    );

    let empty = LabeledNetwork::new(vec![], vec![], 2, Label(2), 0.0).unwrap();
    let mut traj = frozen(&empty, &[0.0]);
    traj.termination = Some(Termination::Extinct { time: 0.0 });
    let e = extinction_report(&traj, 0.05).unwrap();
    assert_eq!(e.bound, 0.0);
    assert!(e.pass && e.extinct);
}

#[test]
fn circle_short_run() {
    let sc = Scenario::Circle(crate::io::CircleSpec {
        r0: 0.5,
        segments: 256,
        center: [0.0, 0.0],
    });
    let net = build_scenario(&sc, 2, 0, 0.01).unwrap();
    let s = FlowSettings {
        eps: 0.02,
        t_end: 0.01,
        ..Default::default()
    };
    let traj = run(net, &s).unwrap();
    let st = SampledTrajectory::new(&traj, &s).unwrap();
    let tl = traj.frames.last().unwrap().t;

    // phi = 1 on a disc containing the circle: length change against
    // -int int |h|^2.
    let phi = Plateau::new(Vec2::zeros(), 0.6, 0.8, 1.0);
    let b = st.brakke_residual(&phi, 0.0, tl, 0.1).unwrap();
    let oracle = -2.0 * PI * (0.5 - (0.25 - 2.0 * tl).sqrt());
    assert!(
        b.lhs < 0.0 && (b.lhs - oracle).abs() < 0.1 * oracle.abs(),
        "{b:?} oracle {oracle}"
    );
    assert!(b.pass, "{b:?}");

    let v = st
        .volume_identity_residual(Label(1), 0.0, tl, 0.05)
        .unwrap();
    assert!(
        (v.dvol + 2.0 * PI * tl).abs() < 0.1 * 2.0 * PI * tl,
        "{v:?}"
    );
    assert!(v.residual.abs() <= 0.05 * v.dvol.abs(), "{v:?}");

    let t = st.tangential_component_report();
    assert!(t.sup <= 0.05, "{t:?}");

    let g = RadialField::new(Vec2::zeros(), 0.8);
    let bv = st.bv_flow_checks(&g, 0.0, tl).unwrap();
    assert!(bv.weak_residual.abs() <= 0.1 * bv.weak_scale, "{bv:?}");
    assert!(
        bv.dissipation_lhs <= bv.dissipation_rhs * (1.0 + 1e-3),
        "{bv:?}"
    );

    let h = st
        .huisken_residual(Vec2::zeros(), 0.13, 0.4, 0.0, tl, 40.0, 0.0)
        .unwrap();
    assert!(h.pass, "{h:?}");

    let report = diagnose(&traj, &s, &DiagnosticsSettings::default()).unwrap();
    assert!(report.render().contains("## brakke"));
}
