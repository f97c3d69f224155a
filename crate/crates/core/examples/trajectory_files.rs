//! Runs a config into a trajectory directory, diagnoses it from disk and
//! exports the plot tables.
//!
//! ```text
//! cargo run --release --example trajectory_files -- /tmp/bubble
//! ```

use std::path::PathBuf;

use grainflow::io::{diagnose_dir, export_plots, run_to_dir, RunConfig, StoredTrajectory};

const CONFIG: &str = r#"
scenario = "double-bubble"
N = 3

[kernel]
eps = 0.02

[schedule]
j = 10
kappa = 2
T = 0.005

[output]
dir = "out/bubble"
snapshot_every = 1

[geometry]
r = 0.3
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("grainflow-{}", std::process::id())));
    let cfg = RunConfig::parse(CONFIG)?;
    let summary = run_to_dir(&cfg, CONFIG, &dir)?;
    println!(
        "{:?} after {} epochs",
        summary.run.termination, summary.run.epochs
    );

    let stored = StoredTrajectory::load(&dir)?;
    println!("{} frames read back", stored.trajectory.frames.len());

    let report = diagnose_dir(&dir)?;
    print!("{}", report.render());
    for f in export_plots(&dir)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
