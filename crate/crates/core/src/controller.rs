//! Bilateral contact controller.
//!
//! Both antennae quiet: FORWARD. Both strongly and similarly bent: REVERSE.
//! Otherwise turn away from the more bent side, with exact ties turning
//! right. A chosen maneuver is held for `t_hold` seconds and is never
//! preempted.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gait::Maneuver;
use crate::sensing::SensorFrame;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    pub theta: f64,
    pub theta_strong: f64,
    pub eps_sym: f64,
    /// Hold duration (s).
    pub t_hold: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            theta: 0.5,
            theta_strong: 0.7,
            eps_sym: 0.15,
            t_hold: 1.0 / 0.8,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.theta && self.theta <= self.theta_strong && self.theta_strong < 1.0) {
            return Err(Error::InvalidInput(format!(
                "need 0 < theta <= theta_strong < 1, got theta = {}, theta_strong = {}",
                self.theta, self.theta_strong
            )));
        }
        if !(self.eps_sym > 0.0) || !(self.t_hold > 0.0) || !self.t_hold.is_finite() {
            return Err(Error::InvalidInput("eps_sym and t_hold must be positive".into()));
        }
        Ok(())
    }
}

fn check_level(b: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&b) {
        Ok(b)
    } else {
        Err(Error::InvalidLevel(b))
    }
}

pub fn decide(b_l: f64, b_r: f64, cfg: &ControllerConfig) -> Result<Maneuver> {
    let (b_l, b_r) = (check_level(b_l)?, check_level(b_r)?);
    if b_l < cfg.theta && b_r < cfg.theta {
        return Ok(Maneuver::Forward);
    }
    if b_l.min(b_r) >= cfg.theta_strong && (b_l - b_r).abs() <= cfg.eps_sym {
        return Ok(Maneuver::Reverse);
    }
    Ok(if b_l >= b_r {
        Maneuver::TurnRight
    } else {
        Maneuver::TurnLeft
    })
}

/// One row of the decision log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub t: f64,
    pub b_l: f64,
    pub b_r: f64,
    pub maneuver: Maneuver,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    active: Maneuver,
    hold_until: f64,
    last_t: Option<f64>,
    last_frame: Option<(f64, f64)>,
}

impl Default for ControllerState {
    fn default() -> Self {
        ControllerState {
            active: Maneuver::Forward,
            hold_until: f64::NEG_INFINITY,
            last_t: None,
            last_frame: None,
        }
    }
}

impl ControllerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn active(&self) -> Maneuver {
        self.active
    }

    pub fn hold_until(&self) -> f64 {
        self.hold_until
    }

    /// Most recent (b_L, b_R) seen.
    pub fn last_frame(&self) -> Option<(f64, f64)> {
        self.last_frame
    }

    pub fn step(&mut self, b_l: f64, b_r: f64, t: f64, cfg: &ControllerConfig) -> Result<Maneuver> {
        if let Some(prev) = self.last_t {
            if t < prev {
                return Err(Error::TimeRegression {
                    previous: prev,
                    current: t,
                });
            }
        }
        self.last_t = Some(t);
        self.last_frame = Some((b_l, b_r));
        if t < self.hold_until {
            return Ok(self.active);
        }
        self.active = decide(b_l, b_r, cfg)?;
        self.hold_until = t + cfg.t_hold;
        Ok(self.active)
    }

    pub fn step_frame(&mut self, frame: &SensorFrame, cfg: &ControllerConfig) -> Result<Maneuver> {
        self.step(frame.left.bend, frame.right.bend, frame.t, cfg)
    }
}

pub fn write_decision_log<W: Write>(writer: W, log: &[Decision]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for d in log {
        w.serialize(d)?;
    }
    w.flush().map_err(|e| Error::io("<decision log>", e))?;
    Ok(())
}
