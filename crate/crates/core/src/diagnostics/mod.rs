//! Checks of the flow's identities and inequalities on stored
//! trajectories, collected into a [`DiagnosticsReport`].

mod checks;
mod fields;
mod report;
mod sampling;

use serde::{Deserialize, Serialize};

pub use checks::{
    angle_histogram, density_report, density_sample_points, extinction_report,
    initial_density_check, junction_angles, BrakkeResidual, BvChecks, ClearingOut, DensityCheck,
    DensityReport, ExtinctionReport, HuiskenResidual, Junction, SampledTrajectory,
    TangentialReport, VolumeIdentity,
};
pub use fields::{Plateau, RadialField, ShiftField, TestFunction, VectorField};
pub use report::{
    diagnose, Assertion, BrakkeEntry, CurvatureBounds, DiagnosticsReport, DissipationEntry,
};
pub use sampling::{edge_quadrature, sample_frames, FrameSample};

use crate::error::ConfigError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsSettings {
    /// Constant in the monotonicity inequality.
    pub c_n: f64,
    /// Time offset factor of the clearing-out kernel.
    pub delta0: f64,
    /// Brakke tolerance as a fraction of `int int phi |h|^2`.
    pub tol_brakke: f64,
    pub tol_volume: f64,
    pub tol_extinction: f64,
    pub tol_huisken: f64,
    /// Largest radius of the initial density scan.
    pub r0: f64,
    /// Required margin below density 2.
    pub density_delta0: f64,
    pub intervals: usize,
    pub clearing_radii: Vec<f64>,
    /// Clearing-out sample points per side of the lattice.
    pub clearing_grid: usize,
}

impl Default for DiagnosticsSettings {
    fn default() -> Self {
        Self {
            c_n: 40.0,
            delta0: 0.01,
            tol_brakke: 0.1,
            tol_volume: 0.05,
            tol_extinction: 0.05,
            tol_huisken: 1e-9,
            r0: 0.05,
            density_delta0: 0.1,
            intervals: 10,
            clearing_radii: vec![0.1, 0.2, 0.4],
            clearing_grid: 9,
        }
    }
}

impl DiagnosticsSettings {
    pub fn check(&self) -> Result<(), ConfigError> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(
                    format!("diagnostics.{name}"),
                    format!("must be positive, got {v}"),
                ))
            }
        };
        pos("c_n", self.c_n)?;
        pos("delta0", self.delta0)?;
        pos("tol_brakke", self.tol_brakke)?;
        pos("tol_volume", self.tol_volume)?;
        pos("tol_extinction", self.tol_extinction)?;
        pos("r0", self.r0)?;
        if !(self.tol_huisken >= 0.0) {
            return Err(ConfigError::new(
                "diagnostics.tol_huisken",
                "must be non-negative",
            ));
        }
        if self.r0 > 1.0 {
            return Err(ConfigError::new("diagnostics.r0", "must not exceed 1"));
        }
        if !(self.density_delta0 > 0.0 && self.density_delta0 < 1.0) {
            return Err(ConfigError::new(
                "diagnostics.density_delta0",
                "must lie in (0, 1)",
            ));
        }
        if self.intervals == 0 {
            return Err(ConfigError::new(
                "diagnostics.intervals",
                "must be at least 1",
            ));
        }
        for r in &self.clearing_radii {
            if !(*r > 0.0 && *r < 0.5) {
                return Err(ConfigError::new(
                    "diagnostics.clearing_radii",
                    format!("radius {r} outside (0, 1/2)"),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
