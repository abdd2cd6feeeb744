//! Experiment configuration file.
//!
//! Every section is optional; missing keys take their defaults. A minimal
//! tunnel file is
//!
//! ```toml
//! scenario = "tunnel"
//! trials = 10
//! base_seed = 0
//!
//! [gait]
//! amplitude = 0.5
//! omega = 0.8
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controller::ControllerConfig;
use crate::error::{Error, Result};
use crate::gait::GaitConfig;
use crate::mechanics::{paper_descending_profile, ProfileFile, ProfileKind, StiffnessProfile};
use crate::sensing::{Calibration, SensorModel, DEFAULT_AVERAGING_SPAN};
use crate::world::{RobotConfig, TunnelLayout};

use super::boulder::BoulderProtocol;
use super::tunnel::{robot_solver_options, TunnelSetup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    BoulderWall,
    Tunnel,
    CalibrationSweep,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::BoulderWall => "boulder_wall",
            Scenario::Tunnel => "tunnel",
            Scenario::CalibrationSweep => "calibration_sweep",
        }
    }
}

/// A named stiffness profile as written in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub name: String,
    #[serde(flatten)]
    pub profile: ProfileFile,
}

impl NamedProfile {
    pub fn from_profile(name: &str, profile: &StiffnessProfile) -> Self {
        NamedProfile {
            name: name.to_string(),
            profile: ProfileFile {
                kind: profile.kind(),
                coils: None,
                stiffness_nmm_per_deg: Some(profile.to_nmm_per_deg()),
            },
        }
    }

    pub fn resolve(&self) -> Result<StiffnessProfile> {
        self.profile.clone().into_profile()
    }
}

/// The three profiles compared on the boulder wall, the robot's own first.
pub fn default_profiles() -> Vec<NamedProfile> {
    let coils = |kind, c: [u32; 6]| ProfileFile {
        kind,
        coils: Some(c.to_vec()),
        stiffness_nmm_per_deg: None,
    };
    vec![
        NamedProfile {
            name: "descending".into(),
            profile: coils(ProfileKind::Descending, [3, 6, 6, 9, 9, 9]),
        },
        NamedProfile {
            name: "uniform_stiff".into(),
            profile: coils(ProfileKind::UniformStiff, [3; 6]),
        },
        NamedProfile {
            name: "uniform_compliant".into(),
            profile: coils(ProfileKind::UniformCompliant, [9; 6]),
        },
    ]
}

/// Sensor front end and calibration. `k_s` and `x_0` describe the sensor
/// used in simulation; the contact threshold comes from the controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensingConfig {
    pub k_s: f64,
    pub x_0: f64,
    pub noise_std: f64,
    pub sample_rate: f64,
    /// Averaging window length (s).
    pub averaging_span: f64,
    pub bend_at_full_deg: f64,
}

impl Default for SensingConfig {
    fn default() -> Self {
        let model = SensorModel::default();
        let calib = Calibration::default();
        SensingConfig {
            k_s: calib.k_s,
            x_0: calib.x_0,
            noise_std: model.noise_std,
            sample_rate: model.sample_rate,
            averaging_span: DEFAULT_AVERAGING_SPAN,
            bend_at_full_deg: model.bend_at_full.to_degrees(),
        }
    }
}

impl SensingConfig {
    pub fn model(&self) -> SensorModel {
        SensorModel {
            noise_std: self.noise_std,
            sample_rate: self.sample_rate,
            bend_at_full: self.bend_at_full_deg.to_radians(),
            ..SensorModel::default()
        }
    }

    pub fn calibration(&self, theta: f64) -> Calibration {
        Calibration {
            k_s: self.k_s,
            x_0: self.x_0,
            theta,
        }
    }
}

/// Tunnel geometry plus the trial cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TunnelConfig {
    #[serde(flatten)]
    pub layout: TunnelLayout,
    /// A trial fails once the head has been stationary this long (s).
    pub stuck_limit: f64,
    pub time_limit: f64,
}

impl Default for TunnelConfig {
    fn default() -> Self {
        TunnelConfig {
            layout: TunnelLayout::default(),
            stuck_limit: 10.0,
            time_limit: 180.0,
        }
    }
}

/// The flattened tunnel section cannot use `deny_unknown_fields`, so its
/// keys are checked against the serialised defaults instead.
fn reject_unknown_tunnel_keys(table: &toml::Table) -> Result<()> {
    let Some(toml::Value::Table(section)) = table.get("tunnel") else {
        return Ok(());
    };
    let known = toml::Value::try_from(TunnelConfig::default())?;
    match section.keys().find(|k| known.get(k.as_str()).is_none()) {
        Some(k) => Err(Error::Config(format!("unknown field `{k}` in [tunnel]"))),
        None => Ok(()),
    }
}

/// Indentation sweep used to calibrate the bend sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Indenter traverse speeds (cm/s).
    pub speeds_cm_s: Vec<f64>,
    /// Indentation depths visited, from `depth_range[0]` to `depth_range[1]` (m).
    pub depth_range: [f64; 2],
    pub depth_steps: usize,
    /// Indenter position along the undeflected antenna, as a fraction of
    /// its length.
    pub station: f64,
    pub indenter_radius: f64,
    /// Sweep points whose reference level lies outside this band are
    /// dropped before fitting; the sigmoid cannot be inverted at 0 or 1.
    pub fit_band: [f64; 2],
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            speeds_cm_s: vec![5.0, 10.0, 15.0],
            depth_range: [-0.005, 0.06],
            depth_steps: 66,
            station: 0.75,
            indenter_radius: 0.005,
            fit_band: [0.02, 0.98],
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.speeds_cm_s.is_empty() || self.speeds_cm_s.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Config(
                "calibration.speeds_cm_s must be non-empty and positive".into(),
            ));
        }
        if !(self.depth_range[0] < self.depth_range[1]) || self.depth_steps < 2 {
            return Err(Error::Config(
                "calibration needs an increasing depth_range and >= 2 steps".into(),
            ));
        }
        if !(self.station > 0.0 && self.station <= 1.0) || !(self.indenter_radius > 0.0) {
            return Err(Error::Config(
                "calibration.station must lie in (0, 1], indenter_radius > 0".into(),
            ));
        }
        if !(0.0 < self.fit_band[0] && self.fit_band[0] < self.fit_band[1] && self.fit_band[1] < 1.0) {
            return Err(Error::Config(
                "calibration.fit_band must satisfy 0 < low < high < 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub trials: u32,
    pub base_seed: u64,
    /// Output directory; nothing is written when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Boulder-wall runs compare all of these; tunnel runs use the first.
    pub profiles: Vec<NamedProfile>,
    pub gait: GaitConfig,
    pub controller: ControllerConfig,
    pub sensing: SensingConfig,
    pub robot: RobotConfig,
    pub boulder: BoulderProtocol,
    pub tunnel: TunnelConfig,
    pub calibration: CalibrationConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::Tunnel,
            trials: 10,
            base_seed: 0,
            out: None,
            profiles: default_profiles(),
            gait: GaitConfig::default(),
            controller: ControllerConfig::default(),
            sensing: SensingConfig::default(),
            robot: RobotConfig::default(),
            boulder: BoulderProtocol::default(),
            tunnel: TunnelConfig::default(),
            calibration: CalibrationConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Defaults for a scenario, with the trial count used in the lab.
    pub fn for_scenario(scenario: Scenario) -> Self {
        let trials = match scenario {
            Scenario::BoulderWall => 20,
            Scenario::Tunnel => 10,
            Scenario::CalibrationSweep => 1,
        };
        ExperimentConfig {
            scenario,
            trials,
            ..ExperimentConfig::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_table(table)
    }

    fn from_table(table: toml::Table) -> Result<Self> {
        reject_unknown_tunnel_keys(&table)?;
        let cfg: ExperimentConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Parses a config for a known scenario. A file that names a different
    /// scenario is rejected; missing `scenario` and `trials` keys take the
    /// scenario's defaults.
    pub fn from_toml_for(scenario: Scenario, text: &str) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(named) = table.get("scenario") {
            if named.as_str() != Some(scenario.as_str()) {
                return Err(Error::Config(format!(
                    "config is for scenario {named}, not {}",
                    scenario.as_str()
                )));
            }
        }
        table.insert("scenario".into(), scenario.as_str().into());
        let trials = Self::for_scenario(scenario).trials;
        table.entry("trials").or_insert_with(|| i64::from(trials).into());
        Self::from_table(table)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Checks every section, reporting the first problem as a config error.
    pub fn validate(&self) -> Result<()> {
        let wrap = |r: Result<()>| {
            r.map_err(|e| match e {
                Error::Config(_) => e,
                other => Error::Config(other.to_string()),
            })
        };
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.profiles.is_empty() {
            return Err(Error::Config("at least one stiffness profile is required".into()));
        }
        for p in &self.profiles {
            wrap(p.resolve().map(|_| ()))?;
        }
        wrap(self.gait.validate())?;
        wrap(self.controller.validate())?;
        wrap(self.sensing.model().validate())?;
        wrap(self.sensing.calibration(self.controller.theta).validate())?;
        if !(self.sensing.averaging_span > 0.0 && self.sensing.averaging_span.is_finite()) {
            return Err(Error::Config("sensing.averaging_span must be positive".into()));
        }
        wrap(self.robot.validate())?;
        wrap(self.boulder.validate())?;
        wrap(self.tunnel.layout.validate())?;
        wrap(self.tunnel_setup().and_then(|s| s.validate()))?;
        self.calibration.validate()
    }

    /// Trial seeds in run order.
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..u64::from(self.trials)).map(move |i| self.base_seed + i)
    }

    pub fn tunnel_setup(&self) -> Result<TunnelSetup> {
        let profile = match self.profiles.first() {
            Some(p) => p.resolve()?,
            None => paper_descending_profile(),
        };
        Ok(TunnelSetup {
            layout: self.tunnel.layout.clone(),
            robot: self.robot.clone(),
            profile,
            gait: self.gait,
            controller: self.controller,
            sensor: self.sensing.model(),
            calibration: self.sensing.calibration(self.controller.theta),
            averaging_span: self.sensing.averaging_span,
            solver: robot_solver_options(),
            stuck_limit: self.tunnel.stuck_limit,
            time_limit: self.tunnel.time_limit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn documented_keys_parse() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            scenario = "boulder_wall"
            trials = 3
            base_seed = 7
            [gait]
            amplitude = 0.4
            xi = 1.0
            omega = 1.0
            phi_turn = 0.2
            [controller]
            theta = 0.45
            theta_strong = 0.75
            eps_sym = 0.1
            t_hold = 1.0
            [sensing]
            k_s = 18.3
            x_0 = 0.305
            [[profiles]]
            name = "custom"
            kind = "custom"
            stiffness_nmm_per_deg = [0.2, 0.1]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.scenario, Scenario::BoulderWall);
        assert_eq!(cfg.seeds().collect::<Vec<_>>(), vec![7, 8, 9]);
        assert_eq!(cfg.gait.amplitude, 0.4);
        assert_eq!(cfg.controller.t_hold, 1.0);
        assert_eq!(cfg.profiles[0].resolve().unwrap().len(), 2);
    }

    #[test]
    fn bad_values_are_config_errors() {
        for text in [
            "trials = 0",
            "unknown = 1",
            "[controller]\ntheta = 0.9\ntheta_strong = 0.7",
            "[gait]\namplitude = 2.0",
            "[tunnel]\nwidth = -1.0",
            "[tunnel]\nbogus = 1",
            "[sensing]\nbogus = 1",
            "profiles = []",
        ] {
            assert!(
                matches!(ExperimentConfig::from_toml(text), Err(Error::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn scenario_is_checked_against_the_command() {
        let cfg = ExperimentConfig::from_toml_for(Scenario::BoulderWall, "base_seed = 3").unwrap();
        assert_eq!(
            (cfg.scenario, cfg.trials, cfg.base_seed),
            (Scenario::BoulderWall, 20, 3)
        );
        assert!(matches!(
            ExperimentConfig::from_toml_for(Scenario::Tunnel, "scenario = \"boulder_wall\""),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn snapshot_round_trips() {
        let cfg = ExperimentConfig::for_scenario(Scenario::BoulderWall);
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    }
}
