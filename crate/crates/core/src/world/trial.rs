use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gait::Maneuver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Success,
    Stuck,
    Timeout,
}

impl TrialOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            TrialOutcome::Success => "success",
            TrialOutcome::Stuck => "stuck",
            TrialOutcome::Timeout => "timeout",
        }
    }
}

/// One timeline sample: head pose, active maneuver and both bend levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelineRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub maneuver: Maneuver,
    pub b_l: f64,
    pub b_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub scenario: String,
    pub timeline: Vec<TimelineRow>,
    pub outcome: TrialOutcome,
    pub elapsed: f64,
    pub path_length: f64,
    pub mean_speed: f64,
    /// Antenna equilibrium solves that did not converge.
    pub solver_failures: usize,
}

impl TrialRecord {
    pub fn write_timeline_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.timeline {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<timeline>", e))?;
        Ok(())
    }
}
