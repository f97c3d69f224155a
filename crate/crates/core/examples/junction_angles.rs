//! Angles at the triple junctions of a double bubble as it flows.

use grainflow::diagnostics::{angle_histogram, junction_angles};
use grainflow::io::{build_scenario, Scenario};
use grainflow::stepper::{run, FlowSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = build_scenario(&Scenario::by_name("double-bubble").unwrap(), 3, 0, 0.01)?;
    let flow = FlowSettings {
        t_end: 0.01,
        snapshot_every: 10,
        ..Default::default()
    };
    let traj = run(net, &flow)?;
    for f in &traj.frames {
        let js = junction_angles(&f.net);
        let angles: Vec<String> = js[0].angles.iter().map(|a| format!("{a:6.1}")).collect();
        println!(
            "t {:.4}  {} junctions, first: {}",
            f.t,
            js.len(),
            angles.join(" ")
        );
    }
    let last = &traj.frames.last().unwrap().net;
    for (bin, count) in angle_histogram(&junction_angles(last), 5.0) {
        if count > 0 {
            println!("[{bin:5.1}, {:5.1})  {count}", bin + 5.0);
        }
    }
    Ok(())
}
