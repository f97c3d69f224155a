use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::diagnostics::DiagnosticsSettings;
use crate::error::ConfigError;
use crate::geometry::LabeledNetwork;
use crate::io::scenarios::{build_scenario, Scenario};
use crate::kernels::WeightVariant;
use crate::stepper::{EpochSchedule, FlowSettings};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    #[serde(rename = "N")]
    n: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_weight")]
    weight: WeightVariant,
    #[serde(default)]
    kernel: RawKernel,
    #[serde(default)]
    schedule: RawSchedule,
    #[serde(default)]
    output: OutputSettings,
    #[serde(default)]
    geometry: toml::Table,
    #[serde(default)]
    diagnostics: DiagnosticsSettings,
}

fn default_weight() -> WeightVariant {
    WeightVariant::ConstantOne
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawKernel {
    eps: f64,
    quad_factor: f64,
}

impl Default for RawKernel {
    fn default() -> Self {
        let d = FlowSettings::default();
        Self {
            eps: d.eps,
            quad_factor: d.quad_factor,
        }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSchedule {
    j: u32,
    kappa: f64,
    #[serde(rename = "T")]
    t_end: f64,
    dt: Option<f64>,
    h_res: Option<f64>,
    guard: f64,
}

impl Default for RawSchedule {
    fn default() -> Self {
        let d = FlowSettings::default();
        Self {
            j: d.j,
            kappa: d.kappa,
            t_end: d.t_end,
            dt: d.dt,
            h_res: d.h_res,
            guard: d.guard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: PathBuf,
    pub snapshot_every: usize,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            snapshot_every: 10,
        }
    }
}

/// Parsed run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub n: u32,
    pub seed: u64,
    pub flow: FlowSettings,
    pub output: OutputSettings,
    pub diagnostics: DiagnosticsSettings,
}

fn de<T: DeserializeOwned>(d: toml::Value, prefix: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(d).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner == ".") {
            (true, _) => inner,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}.{inner}"),
        };
        ConfigError::new(path, e.into_inner().to_string())
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let value: toml::Value =
            toml::from_str(text).map_err(|e| ConfigError::new("<syntax>", e.message()))?;
        let raw: RawConfig = de(value, "")?;
        if raw.geometry.contains_key("kind") {
            return Err(ConfigError::new(
                "geometry.kind",
                "set the scenario with the top-level `scenario` key",
            ));
        }
        let geometry = toml::Value::Table(raw.geometry);
        let scenario = match Scenario::by_name(&raw.scenario) {
            None => {
                return Err(ConfigError::new(
                    "scenario",
                    format!("unknown scenario `{}`", raw.scenario),
                ))
            }
            Some(Scenario::Circle(_)) => Scenario::Circle(de(geometry, "geometry")?),
            Some(Scenario::TwoCircles(_)) => Scenario::TwoCircles(de(geometry, "geometry")?),
            Some(Scenario::Lens(_)) => Scenario::Lens(de(geometry, "geometry")?),
            Some(Scenario::DoubleBubble(_)) => Scenario::DoubleBubble(de(geometry, "geometry")?),
            Some(Scenario::SteinerJunction(_)) => {
                Scenario::SteinerJunction(de(geometry, "geometry")?)
            }
            Some(Scenario::StraightLine(_)) => Scenario::StraightLine(de(geometry, "geometry")?),
            Some(Scenario::GridGrains(_)) => Scenario::GridGrains(de(geometry, "geometry")?),
            Some(Scenario::VoronoiRandom(_)) => Scenario::VoronoiRandom(de(geometry, "geometry")?),
        };
        if raw.output.snapshot_every == 0 {
            return Err(ConfigError::new(
                "output.snapshot_every",
                "must be at least 1",
            ));
        }
        let flow = FlowSettings {
            eps: raw.kernel.eps,
            j: raw.schedule.j,
            kappa: raw.schedule.kappa,
            t_end: raw.schedule.t_end,
            dt: raw.schedule.dt,
            weight: raw.weight,
            quad_factor: raw.kernel.quad_factor,
            h_res: raw.schedule.h_res,
            snapshot_every: raw.output.snapshot_every,
            guard: raw.schedule.guard,
        };
        EpochSchedule::new(&flow, &flow.weight())?;
        raw.diagnostics.check()?;
        Ok(Self {
            scenario,
            n: raw.n,
            seed: raw.seed,
            flow,
            output: raw.output,
            diagnostics: raw.diagnostics,
        })
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Ok((Self::parse(&text)?, text))
    }

    /// Spacing used for scenario construction.
    pub fn h_res(&self) -> f64 {
        self.flow.h_res.unwrap_or(0.5 * self.flow.eps)
    }

    pub fn initial_network(&self) -> Result<LabeledNetwork, ConfigError> {
        build_scenario(&self.scenario, self.n, self.seed, self.h_res())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"
scenario = "circle"
N = 2

[kernel]
eps = 0.02

[schedule]
j = 10
kappa = 2
T = 0.2

[output]
dir = "out/circle"
snapshot_every = 10

[geometry]
r0 = 0.5
segments = 256
"#;

    #[test]
    fn parses_circle() {
        let c = RunConfig::parse(CIRCLE).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.flow.eps, 0.02);
        assert_eq!(c.flow.snapshot_every, 10);
        assert_eq!(c.output.dir, PathBuf::from("out/circle"));
        match c.scenario {
            Scenario::Circle(s) => assert_eq!((s.r0, s.segments), (0.5, 256)),
            other => panic!("{other:?}"),
        }
        assert_eq!(c.diagnostics, DiagnosticsSettings::default());
    }

    fn err(text: &str) -> ConfigError {
        RunConfig::parse(text).unwrap_err()
    }

    #[test]
    fn errors_carry_field_paths() {
        assert_eq!(
            err(&CIRCLE.replace("eps = 0.02", "eps = -1.0")).path,
            "kernel.eps"
        );
        assert_eq!(
            err(&CIRCLE.replace("kappa = 2", "kappa = 0.5")).path,
            "schedule.kappa"
        );
        assert_eq!(
            err(&CIRCLE.replace("r0 = 0.5", "r0 = \"big\"")).path,
            "geometry.r0"
        );
        assert_eq!(
            err(&CIRCLE.replace("segments = 256", "segmnts = 256")).path,
            "geometry.segmnts"
        );
        assert_eq!(
            err(&CIRCLE.replace("\"circle\"", "\"square\"")).path,
            "scenario"
        );
        assert_eq!(
            err(&CIRCLE.replace("T = 0.2", "T = \"x\"")).path,
            "schedule.T"
        );
        assert_eq!(err("N = 2").path, ".");
        assert_eq!(err("scenario = ").path, "<syntax>");
    }

    #[test]
    fn scenario_label_count_is_checked_on_build() {
        let c = RunConfig::parse(&CIRCLE.replace("N = 2", "N = 4")).unwrap();
        assert_eq!(c.initial_network().unwrap_err().path, "N");
    }

    #[test]
    fn missing_file() {
        assert_eq!(
            RunConfig::load(Path::new("/nonexistent/x.toml"))
                .unwrap_err()
                .path,
            "<file>"
        );
    }
}
