//! Coarsening of a random Voronoi partition: grains shrink and vanish.

use grainflow::geometry::{grain_summaries, total_mass};
use grainflow::io::{build_scenario, Scenario};
use grainflow::stepper::{run, FlowSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 12;
    let net = build_scenario(&Scenario::by_name("voronoi-random").unwrap(), n, 11, 0.01)?;
    let flow = FlowSettings {
        t_end: 0.02,
        snapshot_every: 20,
        ..Default::default()
    };
    let w = flow.weight();
    let traj = run(net, &flow)?;
    for f in &traj.frames {
        let alive = grain_summaries(&f.net)?
            .iter()
            .filter(|g| !f.net.is_exterior(g.label) && !g.extinct)
            .count();
        println!(
            "t {:.4}  grains {alive:>2}  boundary mass {:.4}",
            f.t,
            total_mass(&f.net, &w)
        );
    }
    let ledger = &traj.ledger;
    println!(
        "surgeries flagged {}, bound violations {}, guard halvings {}",
        ledger.flagged_surgeries, ledger.bound_violations, ledger.guard_halvings
    );
    Ok(())
}
