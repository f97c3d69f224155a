//! Builds every built-in initial network and prints its grains.
//!
//! ```text
//! cargo run --example scenarios
//! ```

use grainflow::geometry::{grain_summaries, validate};
use grainflow::io::{build_scenario, Scenario, SCENARIO_KINDS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in SCENARIO_KINDS {
        let sc = Scenario::by_name(kind).expect("known kind");
        let n = sc.label_count().unwrap_or(10);
        let net = build_scenario(&sc, n, 7, 0.02)?;
        let problems = validate(&net);
        println!(
            "{kind}: {} vertices, {} edges, length {:.4}, {}",
            net.vertices().len(),
            net.edges().len(),
            net.total_length(),
            if problems.is_empty() {
                "valid"
            } else {
                "INVALID"
            }
        );
        for g in grain_summaries(&net)? {
            if !net.is_exterior(g.label) {
                println!(
                    "    grain {:>2}  area {:.5}  perimeter {:.4}",
                    g.label.0, g.area, g.perimeter
                );
            }
        }
    }
    Ok(())
}
