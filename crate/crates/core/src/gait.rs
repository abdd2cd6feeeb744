//! Serpenoid body waves and the four maneuver templates.
//!
//! Joint `i` (counted 1..=N from the head) follows
//! `alpha_i(t) = A sin(2 pi xi i / N - 2 pi omega t) + phi`. Running the wave
//! tail-to-head flips the sign of the temporal term.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default mechanical limit on any body joint (rad).
pub const DEFAULT_JOINT_LIMIT: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveDirection {
    HeadToTail,
    TailToHead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Maneuver {
    #[serde(rename = "FORWARD")]
    Forward,
    #[serde(rename = "TURN_L")]
    TurnLeft,
    #[serde(rename = "TURN_R")]
    TurnRight,
    #[serde(rename = "REVERSE")]
    Reverse,
}

impl Maneuver {
    pub const ALL: [Maneuver; 4] = [
        Maneuver::Forward,
        Maneuver::TurnLeft,
        Maneuver::TurnRight,
        Maneuver::Reverse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Maneuver::Forward => "FORWARD",
            Maneuver::TurnLeft => "TURN_L",
            Maneuver::TurnRight => "TURN_R",
            Maneuver::Reverse => "REVERSE",
        }
    }

    /// Left/right swap; FORWARD and REVERSE are fixed.
    pub fn mirrored(self) -> Self {
        match self {
            Maneuver::TurnLeft => Maneuver::TurnRight,
            Maneuver::TurnRight => Maneuver::TurnLeft,
            m => m,
        }
    }
}

impl fmt::Display for Maneuver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Maneuver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Maneuver::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown maneuver {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitParams {
    /// Body-wave amplitude (rad).
    pub amplitude: f64,
    /// Spatial frequency (waves per body).
    pub xi: f64,
    /// Temporal frequency (Hz).
    pub omega: f64,
    /// Constant joint offset (rad).
    pub phi: f64,
    pub joints: usize,
    pub direction: WaveDirection,
}

impl Default for GaitParams {
    fn default() -> Self {
        GaitParams {
            amplitude: 0.5,
            xi: 1.0,
            omega: 0.8,
            phi: 0.0,
            joints: 5,
            direction: WaveDirection::HeadToTail,
        }
    }
}

impl GaitParams {
    pub fn validate(&self, joint_limit: f64) -> Result<()> {
        if !(self.amplitude >= 0.0) || !self.xi.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidInput("amplitude must be >= 0 and xi, phi finite".into()));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.joints == 0 {
            return Err(Error::InvalidInput("gait needs at least one joint".into()));
        }
        if self.amplitude + self.phi.abs() > joint_limit {
            return Err(Error::InvalidInput(format!(
                "|A| + |phi| = {:.3} rad exceeds joint limit {joint_limit} rad",
                self.amplitude + self.phi.abs()
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        1.0 / self.omega
    }
}

pub fn serpenoid_angles(t: f64, params: &GaitParams) -> Vec<f64> {
    let temporal = match params.direction {
        WaveDirection::HeadToTail => TAU * params.omega * t,
        WaveDirection::TailToHead => -TAU * params.omega * t,
    };
    let n = params.joints as f64;
    (1..=params.joints)
        .map(|i| params.amplitude * (TAU * params.xi * i as f64 / n - temporal).sin() + params.phi)
        .collect()
}

pub fn maneuver_template(m: Maneuver, base: &GaitParams, phi_turn: f64) -> GaitParams {
    let (phi, direction) = match m {
        Maneuver::Forward => (0.0, WaveDirection::HeadToTail),
        Maneuver::TurnLeft => (phi_turn, WaveDirection::HeadToTail),
        Maneuver::TurnRight => (-phi_turn, WaveDirection::HeadToTail),
        Maneuver::Reverse => (0.0, WaveDirection::TailToHead),
    };
    GaitParams {
        phi,
        direction,
        ..*base
    }
}

/// Gait section of an experiment config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaitConfig {
    pub amplitude: f64,
    pub xi: f64,
    pub omega: f64,
    pub phi_turn: f64,
    pub joints: usize,
    pub joint_limit: f64,
}

impl Default for GaitConfig {
    fn default() -> Self {
        GaitConfig {
            amplitude: 0.5,
            xi: 1.0,
            omega: 0.8,
            phi_turn: 0.25,
            joints: 5,
            joint_limit: DEFAULT_JOINT_LIMIT,
        }
    }
}

impl GaitConfig {
    pub fn base(&self) -> GaitParams {
        GaitParams {
            amplitude: self.amplitude,
            xi: self.xi,
            omega: self.omega,
            phi: 0.0,
            joints: self.joints,
            direction: WaveDirection::HeadToTail,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.joint_limit > 0.0) || !(self.phi_turn >= 0.0) {
            return Err(Error::InvalidInput("joint_limit must be > 0 and phi_turn >= 0".into()));
        }
        for m in Maneuver::ALL {
            self.template(m).validate(self.joint_limit)?;
        }
        Ok(())
    }

    pub fn template(&self, m: Maneuver) -> GaitParams {
        maneuver_template(m, &self.base(), self.phi_turn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_gives_constant_offset() {
        let p = GaitParams {
            amplitude: 0.0,
            phi: 0.3,
            ..Default::default()
        };
        for t in [0.0, 0.37, 5.1] {
            assert!(serpenoid_angles(t, &p).iter().all(|a| *a == 0.3));
        }
    }

    #[test]
    fn adjacent_joints_differ_by_fifth_of_a_wave() {
        let p = GaitParams::default();
        let t = 0.23;
        let a = serpenoid_angles(t, &p);
        assert_eq!(a.len(), 5);
        for (i, ai) in a.iter().enumerate() {
            let phase = TAU * (i + 1) as f64 / 5.0 - TAU * 0.8 * t;
            assert!((ai - 0.5 * phase.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_in_omega() {
        let p = GaitParams {
            omega: 1.3,
            ..Default::default()
        };
        let a = serpenoid_angles(0.4, &p);
        let b = serpenoid_angles(0.4 + p.period(), &p);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_to_head_runs_the_wave_backwards() {
        let fwd = GaitParams::default();
        let rev = GaitParams {
            direction: WaveDirection::TailToHead,
            ..fwd
        };
        let a = serpenoid_angles(-0.2, &fwd);
        let b = serpenoid_angles(0.2, &rev);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn templates() {
        let base = GaitParams {
            phi: 0.1,
            ..Default::default()
        };
        let f = maneuver_template(Maneuver::Forward, &base, 0.25);
        assert_eq!((f.phi, f.direction), (0.0, WaveDirection::HeadToTail));
        let l = maneuver_template(Maneuver::TurnLeft, &base, 0.25);
        let r = maneuver_template(Maneuver::TurnRight, &base, 0.25);
        assert_eq!(l.phi, -r.phi);
        assert_eq!(l.phi, 0.25);
        let rev = maneuver_template(Maneuver::Reverse, &base, 0.25);
        assert_eq!(
            rev,
            GaitParams {
                direction: WaveDirection::TailToHead,
                ..f
            }
        );
    }

    #[test]
    fn joint_limit_is_enforced() {
        let p = GaitParams {
            amplitude: 1.0,
            phi: 0.3,
            ..Default::default()
        };
        assert!(p.validate(DEFAULT_JOINT_LIMIT).is_err());
        assert!(GaitConfig::default().validate().is_ok());
        assert!(GaitParams {
            omega: 0.0,
            ..Default::default()
        }
        .validate(1.2)
        .is_err());
    }

    #[test]
    fn maneuver_names_round_trip() {
        for m in Maneuver::ALL {
            assert_eq!(m.to_string().parse::<Maneuver>().unwrap(), m);
            assert_eq!(m.mirrored().mirrored(), m);
        }
    }
}
