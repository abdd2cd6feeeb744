//! Cluttered-tunnel traversal, closed loop against open loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controller::{ControllerConfig, ControllerState};
use crate::error::{Error, Result};
use crate::gait::{GaitConfig, Maneuver};
use crate::mechanics::{paper_descending_profile, EquilibriumSolver, SolverOptions, StiffnessProfile};
use crate::sensing::{Calibration, SensorModel, SensorPipeline, DEFAULT_AVERAGING_SPAN};
use crate::world::{
    step_robot, RobotConfig, RobotModel, RobotState, TimelineRow, TrialOutcome, TrialRecord, TunnelLayout,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    ClosedLoop,
    OpenLoop,
}

impl ControlMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ControlMode::ClosedLoop => "closed_loop",
            ControlMode::OpenLoop => "open_loop",
        }
    }
}

/// Everything a single tunnel trial needs.
#[derive(Debug, Clone, PartialEq)]
pub struct TunnelSetup {
    pub layout: TunnelLayout,
    pub robot: RobotConfig,
    pub profile: StiffnessProfile,
    pub gait: GaitConfig,
    pub controller: ControllerConfig,
    pub sensor: SensorModel,
    pub calibration: Calibration,
    pub averaging_span: f64,
    pub solver: SolverOptions,
    /// Trial limits (s).
    pub stuck_limit: f64,
    pub time_limit: f64,
}

impl Default for TunnelSetup {
    fn default() -> Self {
        TunnelSetup {
            layout: TunnelLayout::default(),
            robot: RobotConfig::default(),
            profile: paper_descending_profile(),
            gait: GaitConfig::default(),
            controller: ControllerConfig::default(),
            sensor: SensorModel::default(),
            calibration: Calibration::default(),
            averaging_span: DEFAULT_AVERAGING_SPAN,
            solver: robot_solver_options(),
            stuck_limit: 10.0,
            time_limit: 180.0,
        }
    }
}

/// Solver settings for antennae carried by the robot: a stalled energy is
/// accepted, since wall corners make the contact energy non-smooth.
pub fn robot_solver_options() -> SolverOptions {
    SolverOptions {
        stationary_energy: Some(1e-10),
        stationary_residual: 5e-4,
        max_iterations: 300,
        ..SolverOptions::default()
    }
}

impl TunnelSetup {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("stuck_limit", self.stuck_limit), ("time_limit", self.time_limit)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tunnel.{name} must be positive, got {v}")));
            }
        }
        self.layout.validate()?;
        self.robot.validate()?;
        self.gait.validate()?;
        self.controller.validate()?;
        self.sensor.validate()?;
        self.calibration.validate()?;
        Ok(())
    }
}

pub fn run_tunnel_trial(setup: &TunnelSetup, mode: ControlMode, seed: u64) -> Result<TrialRecord> {
    setup.validate()?;
    let tunnel = setup.layout.build(seed)?;
    let mut env = tunnel.env;
    let model = RobotModel::new(setup.robot.clone(), setup.profile.clone())?;
    let solver = EquilibriumSolver::new(setup.solver);
    let mut sensors = SensorPipeline::new(setup.sensor, setup.calibration, setup.averaging_span)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut controller = ControllerState::new();
    let dt = setup.sensor.sample_period();

    let mut state = RobotState::new(&model, tunnel.start, &env, &solver)?;
    let mut timeline = Vec::new();
    let max_steps = (setup.time_limit / dt).ceil() as usize;
    let mut outcome = TrialOutcome::Timeout;
    let mut elapsed = setup.time_limit;

    for i in 0..=max_steps {
        let t = i as f64 * dt;
        let frame = sensors.sample(t, state.left.total_bend, state.right.total_bend, &mut rng)?;
        let maneuver = match mode {
            ControlMode::ClosedLoop => controller.step_frame(&frame, &setup.controller)?,
            ControlMode::OpenLoop => Maneuver::Forward,
        };
        timeline.push(TimelineRow {
            t,
            x: state.head.x,
            y: state.head.y,
            heading: state.head.heading,
            maneuver,
            b_l: frame.left.bend,
            b_r: frame.right.bend,
        });
        if env.goal.contains(state.head.position()) {
            outcome = TrialOutcome::Success;
            elapsed = t;
            break;
        }
        if state.stuck_timer > setup.stuck_limit {
            outcome = TrialOutcome::Stuck;
            elapsed = t;
            break;
        }
        if i == max_steps {
            break;
        }
        state = step_robot(&state, maneuver, &setup.gait, dt, &mut env, &model, &solver)?;
    }

    Ok(TrialRecord {
        seed,
        scenario: format!("tunnel/{}", mode.as_str()),
        timeline,
        outcome,
        elapsed,
        path_length: state.path_length,
        mean_speed: if elapsed > 0.0 {
            state.path_length / elapsed
        } else {
            0.0
        },
        solver_failures: state.solver_failures,
    })
}
