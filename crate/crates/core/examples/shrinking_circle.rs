//! A single circle under the smoothed flow, against the exact radius
//! `sqrt(r0^2 - 2t)`.
//!
//! ```text
//! cargo run --release --example shrinking_circle
//! ```

use grainflow::geometry::signed_areas;
use grainflow::io::{build_scenario, CircleSpec, Scenario};
use grainflow::stepper::{run, FlowSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r0 = 0.3;
    let sc = Scenario::Circle(CircleSpec {
        r0,
        segments: 192,
        ..Default::default()
    });
    let net = build_scenario(&sc, 2, 0, 0.01)?;
    let settings = FlowSettings {
        eps: 0.02,
        t_end: 0.03,
        snapshot_every: 8,
        ..Default::default()
    };
    let traj = run(net, &settings)?;

    println!("{:>8} {:>9} {:>9} {:>8}", "t", "radius", "exact", "error");
    for f in &traj.frames {
        let area: f64 = signed_areas(&f.net).iter().map(|a| a.1).sum();
        let r = (area / std::f64::consts::PI).sqrt();
        let exact = (r0 * r0 - 2.0 * f.t).max(0.0).sqrt();
        println!(
            "{:8.5} {r:9.5} {exact:9.5} {:7.2}%",
            f.t,
            100.0 * (r - exact) / exact
        );
    }
    println!("{:?}", traj.ledger);
    Ok(())
}
