//! Density ratios, Huisken monotonicity and clearing out on a Steiner
//! junction and a circle.

use grainflow::diagnostics::{density_report, initial_density_check, SampledTrajectory};
use grainflow::geometry::Vec2;
use grainflow::io::{build_scenario, BoxedSpec, CircleSpec, Scenario};
use grainflow::stepper::{run, FlowSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steiner = Scenario::SteinerJunction(BoxedSpec {
        half_width: 1.0,
        spacing: Some(0.01),
    });
    let net = build_scenario(&steiner, 4, 0, 0.01)?;
    let d = density_report(
        &net,
        &[0.05, 0.1, 0.2],
        &[Vec2::zeros(), Vec2::new(0.3, 0.0)],
    );
    println!(
        "Steiner sup density {:.4} at ({:.2}, {:.2})",
        d.sup, d.at[0], d.at[1]
    );
    let check = initial_density_check(&net, 0.05, 0.1);
    println!(
        "initial density check: {} (threshold {:.2})",
        check.pass, check.threshold
    );

    let sc = Scenario::Circle(CircleSpec {
        r0: 0.3,
        segments: 192,
        ..Default::default()
    });
    let flow = FlowSettings {
        t_end: 0.02,
        ..Default::default()
    };
    let traj = run(build_scenario(&sc, 2, 0, 0.01)?, &flow)?;
    let st = SampledTrajectory::new(&traj, &flow)?;
    let times = st.times();
    let (t0, t1) = (times[0], *times.last().unwrap());

    for y in [Vec2::new(0.3, 0.0), Vec2::zeros()] {
        let h = st.huisken_residual(y, t1 + 0.01, 0.2, t0, t1, 40.0, 1e-9)?;
        println!(
            "Huisken at ({:.1}, {:.1}): lhs {:+.4e}  rhs {:+.4e}  {}",
            y.x,
            y.y,
            h.lhs,
            h.rhs,
            if h.pass { "ok" } else { "FAIL" }
        );
    }
    for y in [Vec2::zeros(), Vec2::new(0.3, 0.0)] {
        let c = st.clearing_out_check(y, t0, 0.1, 0.01)?;
        println!(
            "clearing out at ({:.1}, {:.1}): kernel mass {:.4}, predicted clear {}, outcome {:?}",
            y.x, y.y, c.kernel_mass, c.predicted, c.outcome
        );
    }
    Ok(())
}
