//! Scenarios, configuration files and trajectory directories.

mod config;
mod pipeline;
mod plots;
mod scenarios;
mod snapshot;
mod trajdir;

pub use config::{OutputSettings, RunConfig};
pub use pipeline::{diagnose_dir, run_to_dir};
pub use plots::{export_plots, PLOT_DIR};
pub use scenarios::{
    build_scenario, BoxedSpec, CircleSpec, DoubleBubbleSpec, GridSpec, LensSpec, Scenario,
    TwoCirclesSpec, VoronoiSpec, SCENARIO_KINDS,
};
pub use snapshot::{read_snapshot, snapshot_from_str, snapshot_to_string, write_snapshot};
pub use trajdir::{
    read_series, snapshot_path, StoredSummary, StoredTrajectory, TrajectoryWriter, CONFIG_FILE,
    DEFORMATIONS_FILE, EPOCHS_FILE, REPORT_FILE, SERIES_FILE, SNAPSHOT_DIR, SUMMARY_FILE,
};
