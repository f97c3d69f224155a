use std::fs;
use std::path::Path;

use crate::diagnostics::{diagnose, initial_density_check, DiagnosticsReport};
use crate::error::{DiagnoseError, IoError, RunError};
use crate::io::config::RunConfig;
use crate::io::trajdir::{StoredSummary, StoredTrajectory, TrajectoryWriter, REPORT_FILE};
use crate::stepper::run_observed;

/// Runs a parsed config and stores the trajectory in `out`, which must be
/// empty or absent.
pub fn run_to_dir(
    cfg: &RunConfig,
    config_text: &str,
    out: &Path,
) -> Result<StoredSummary, RunError> {
    let net = cfg.initial_network()?;
    let ds = &cfg.diagnostics;
    let density = initial_density_check(&net, ds.r0, ds.density_delta0);
    if !density.pass {
        log::warn!(
            "initial density {:.4} at ({:.4}, {:.4}) exceeds {:.4}",
            density.report.sup,
            density.report.at[0],
            density.report.at[1],
            density.threshold
        );
    }
    let mut writer = TrajectoryWriter::create(out, config_text, cfg.n, cfg.flow.weight())?;
    let run = run_observed(net, &cfg.flow, &mut writer)?;
    log::info!(
        "{} epochs, t = {:.6}, {:?}",
        run.epochs,
        run.t,
        run.termination
    );
    let summary = StoredSummary {
        run,
        initial_density: density.report.sup,
        density_ok: density.pass,
    };
    writer.finish(&summary)?;
    Ok(summary)
}

/// Loads a trajectory directory, diagnoses it with the settings of its
/// stored config and writes the rendered report next to it.
pub fn diagnose_dir(dir: &Path) -> Result<DiagnosticsReport, DiagnoseError> {
    let stored = StoredTrajectory::load(dir)?;
    let cfg = RunConfig::parse(&stored.config_text)?;
    let report = diagnose(&stored.trajectory, &cfg.flow, &cfg.diagnostics)?;
    let p = dir.join(REPORT_FILE);
    fs::write(&p, report.render()).map_err(|e| IoError::file(&p, e))?;
    Ok(report)
}
