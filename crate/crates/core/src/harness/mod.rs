//! Seeded experiments and their CSV outputs.
//!
//! Each run writes into its output directory:
//!
//! - `config.snapshot`: the resolved configuration,
//! - `summary.csv`: one row per condition,
//! - `outcomes.csv`: one row per trial,
//! - `trials/<condition>/<seed>.csv`: the full trace of each trial.
//!
//! Trial seeds are `base_seed + index`; every condition sees the same seeds.

mod boulder;
mod calibration;
mod config;
mod experiments;
mod summary;
mod tunnel;

pub use boulder::{run_boulder_trial, BoulderOutcome, BoulderProtocol, BoulderSample, BoulderTrial};
pub use calibration::{run_calibration_sweep, CalibrationReport, FitRow, SweepRow};
pub use config::{
    default_profiles, CalibrationConfig, ExperimentConfig, NamedProfile, Scenario, SensingConfig, TunnelConfig,
};
pub use experiments::{run_boulder_wall, run_tunnel};
pub use summary::{ConditionSummary, ExperimentSummary, TrialSummary};
pub use tunnel::{robot_solver_options, run_tunnel_trial, ControlMode, TunnelSetup};
