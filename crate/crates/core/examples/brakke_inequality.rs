//! Brakke inequality and the volume identity on a short double-bubble run.
//!
//! The small plateau on the top junction lands near its tolerance: within a
//! few `eps` of a junction `h_eps` is not the curvature of the polyline.

use grainflow::diagnostics::{Plateau, SampledTrajectory};
use grainflow::geometry::Vec2;
use grainflow::io::{build_scenario, Scenario};
use grainflow::stepper::{run, FlowSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = build_scenario(&Scenario::by_name("double-bubble").unwrap(), 3, 0, 0.01)?;
    let flow = FlowSettings {
        t_end: 0.008,
        ..Default::default()
    };
    let traj = run(net, &flow)?;
    let st = SampledTrajectory::new(&traj, &flow)?;
    let times = st.times();
    let (t0, t1) = (times[0], *times.last().unwrap());

    let phis = [
        ("whole", Plateau::new(Vec2::zeros(), 0.5, 0.8, 1.0)),
        (
            "top junction",
            Plateau::new(Vec2::new(0.0, 0.26), 0.02, 0.1, 1.0),
        ),
        (
            "left lobe",
            Plateau::new(Vec2::new(-0.3, 0.0), 0.05, 0.15, 1.0),
        ),
    ];
    for (name, phi) in &phis {
        let b = st.brakke_residual(phi, t0, t1, 0.1)?;
        println!(
            "{name:<13} lhs {:+.5}  rhs {:+.5}  residual {:+.2e}  tol {:.2e}  diss {:.3e}  {}",
            b.lhs,
            b.rhs,
            b.residual,
            b.tol,
            b.dissipation,
            if b.pass { "ok" } else { "FAIL" }
        );
    }
    let lobes: Vec<_> = traj.frames[0].net.bounded_labels().collect();
    for label in lobes {
        let v = st.volume_identity_residual(label, t0, t1, 0.05)?;
        println!(
            "grain {}: area change {:+.6}, flux {:+.6}",
            label.0, v.dvol, v.flux
        );
    }
    Ok(())
}
