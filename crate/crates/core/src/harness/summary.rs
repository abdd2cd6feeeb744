use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::Scenario;

/// How a single trial ended. Skipped trials are listed but never counted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub condition: String,
    pub seed: u64,
    pub outcome: String,
    pub elapsed: f64,
    pub path_length: Option<f64>,
    pub mean_speed: Option<f64>,
}

impl TrialSummary {
    pub fn is_success(&self) -> bool {
        self.outcome == "success"
    }
}

/// Aggregate for one condition (a stiffness profile or a control mode).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionSummary {
    pub condition: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean of per-trial mean speeds over successful runs (m/s).
    pub mean_speed: Option<f64>,
    pub skipped: usize,
    pub jam: usize,
    pub missed_contact: usize,
    pub solver_failure: usize,
    pub stuck: usize,
    pub timeout: usize,
}

impl ConditionSummary {
    /// Folds the trial rows of one condition, in the order given.
    pub fn from_trials(condition: &str, rows: &[TrialSummary]) -> Self {
        let count = |o: &str| {
            rows.iter()
                .filter(|r| r.condition == condition && r.outcome == o)
                .count()
        };
        let mine: Vec<&TrialSummary> = rows.iter().filter(|r| r.condition == condition).collect();
        let skipped = count("skipped");
        let trials = mine.len() - skipped;
        let speeds: Vec<f64> = mine
            .iter()
            .filter(|r| r.is_success())
            .filter_map(|r| r.mean_speed)
            .collect();
        let successes = count("success");
        ConditionSummary {
            condition: condition.to_string(),
            trials,
            successes,
            success_rate: if trials > 0 {
                successes as f64 / trials as f64
            } else {
                0.0
            },
            mean_speed: (!speeds.is_empty()).then(|| speeds.iter().sum::<f64>() / speeds.len() as f64),
            skipped,
            jam: count("jam"),
            missed_contact: count("missed_contact"),
            solver_failure: count("solver_failure"),
            stuck: count("stuck"),
            timeout: count("timeout"),
        }
    }

    pub fn failures(&self) -> usize {
        self.trials - self.successes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub scenario: Scenario,
    pub base_seed: u64,
    pub conditions: Vec<ConditionSummary>,
    pub trials: Vec<TrialSummary>,
}

impl ExperimentSummary {
    pub fn new(scenario: Scenario, base_seed: u64, condition_names: &[String], trials: Vec<TrialSummary>) -> Self {
        let conditions = condition_names
            .iter()
            .map(|c| ConditionSummary::from_trials(c, &trials))
            .collect();
        ExperimentSummary {
            scenario,
            base_seed,
            conditions,
            trials,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionSummary> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    /// `summary.csv`: one row per condition.
    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_rows(writer, &self.conditions, "<summary>")
    }

    /// `outcomes.csv`: one row per trial, skipped ones included.
    pub fn write_outcomes_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_rows(writer, &self.trials, "<outcomes>")
    }

    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        let open = |name: &str| {
            let path = dir.join(name);
            std::fs::File::create(&path).map_err(|e| Error::io(&path, e))
        };
        self.write_summary_csv(open("summary.csv")?)?;
        self.write_outcomes_csv(open("outcomes.csv")?)
    }
}

pub(crate) fn write_rows<W: Write, T: Serialize>(writer: W, rows: &[T], label: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(label, e))?;
    Ok(())
}
