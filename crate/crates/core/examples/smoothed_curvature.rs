//! Smoothed mean curvature on a circle and near a triple junction.
//!
//! On the circle `r |h_eps|` approaches 1 as `eps / r` shrinks. At a
//! junction the smoothing spreads the curvature of the arcs over a few
//! `eps`.

use grainflow::geometry::Vec2;
use grainflow::io::{build_scenario, CircleSpec, Scenario};
use grainflow::kernels::{KernelSuite, WeightOmega};
use grainflow::stepper::sample_curvature;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = WeightOmega::constant_one();
    let suite = KernelSuite::new(0.02)?;
    for r0 in [0.4, 0.2, 0.1] {
        let sc = Scenario::Circle(CircleSpec {
            r0,
            segments: 512,
            ..Default::default()
        });
        let net = build_scenario(&sc, 2, 0, 0.01)?;
        let s = sample_curvature(&net, &suite, &w, 4.0);
        let mean = s.h.iter().map(|h| h.norm()).sum::<f64>() / s.h.len() as f64;
        println!("circle r = {r0}: r |h| = {:.5}", r0 * mean);
    }

    let net = build_scenario(&Scenario::by_name("double-bubble").unwrap(), 3, 0, 0.01)?;
    let s = sample_curvature(&net, &suite, &w, 4.0);
    let top = Vec2::new(0.0, 0.3 * 3f64.sqrt() / 2.0);
    let mut near: Vec<(f64, usize)> = (0..net.vertices().len())
        .map(|v| ((net.vertex(v) - top).norm(), v))
        .filter(|p| p.0 < 0.05)
        .collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (d, v) in near {
        let p = net.vertex(v);
        println!(
            "junction + {d:.3}: at ({:+.3}, {:+.3}) h = ({:+.3}, {:+.3})",
            p.x, p.y, s.h[v].x, s.h[v].y
        );
    }
    Ok(())
}
