use std::fs::File;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mechanics::SolverOptions;

use super::boulder::{run_boulder_trial, BoulderTrial};
use super::config::{ExperimentConfig, Scenario};
use super::summary::{write_rows, ExperimentSummary, TrialSummary};
use super::tunnel::{run_tunnel_trial, ControlMode};

fn require(cfg: &ExperimentConfig, scenario: Scenario) -> Result<()> {
    if cfg.scenario != scenario {
        return Err(Error::Config(format!(
            "expected a {} config, got {}",
            scenario.as_str(),
            cfg.scenario.as_str()
        )));
    }
    cfg.validate()
}

/// Creates the output directory and writes `config.snapshot`. The snapshot
/// omits the output path so that identical runs produce identical files.
pub(crate) fn prepare_output(cfg: &ExperimentConfig) -> Result<Option<PathBuf>> {
    let Some(dir) = cfg.out.clone() else {
        return Ok(None);
    };
    let trials = dir.join("trials");
    std::fs::create_dir_all(&trials).map_err(|e| Error::io(&trials, e))?;
    let snapshot = ExperimentConfig {
        out: None,
        ..cfg.clone()
    };
    let path = dir.join("config.snapshot");
    std::fs::write(&path, snapshot.to_toml()?).map_err(|e| Error::io(&path, e))?;
    Ok(Some(dir))
}

pub(crate) fn trial_file(dir: &Path, condition: &str, seed: u64) -> Result<File> {
    let sub = dir.join("trials").join(condition);
    std::fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
    let path = sub.join(format!("{seed}.csv"));
    File::create(&path).map_err(|e| Error::io(&path, e))
}

fn boulder_row(condition: &str, trial: &BoulderTrial) -> TrialSummary {
    TrialSummary {
        condition: condition.to_string(),
        seed: trial.seed,
        outcome: trial.outcome.as_str().to_string(),
        elapsed: trial.elapsed,
        path_length: None,
        mean_speed: None,
    }
}

/// Drags each configured antenna profile past the boulder wall once per
/// seed. Every profile sees the same seeds.
pub fn run_boulder_wall(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    require(cfg, Scenario::BoulderWall)?;
    let out = prepare_output(cfg)?;
    let sensor = cfg.sensing.model();
    let calib = cfg.sensing.calibration(cfg.controller.theta);
    let solver = SolverOptions::default();

    let mut names = Vec::new();
    let mut rows = Vec::new();
    for named in &cfg.profiles {
        let profile = named.resolve()?;
        names.push(named.name.clone());
        for seed in cfg.seeds() {
            let trial = run_boulder_trial(
                &profile,
                &cfg.boulder,
                &sensor,
                &calib,
                cfg.sensing.averaging_span,
                &solver,
                seed,
            )?;
            if let Some(dir) = &out {
                write_rows(trial_file(dir, &named.name, seed)?, &trial.samples, "<boulder trial>")?;
            }
            rows.push(boulder_row(&named.name, &trial));
        }
    }
    finish(cfg, &names, rows, out.as_deref())
}

/// Runs every seed closed loop and open loop in the same generated tunnel.
/// Seeds whose tunnel cannot be generated are skipped in both modes.
pub fn run_tunnel(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    require(cfg, Scenario::Tunnel)?;
    let out = prepare_output(cfg)?;
    let setup = cfg.tunnel_setup()?;
    let modes = [ControlMode::ClosedLoop, ControlMode::OpenLoop];
    let names: Vec<String> = modes.iter().map(|m| m.as_str().to_string()).collect();

    let mut rows = Vec::new();
    for seed in cfg.seeds() {
        if let Err(e) = setup.layout.build(seed) {
            if !matches!(e, Error::Infeasible { .. }) {
                return Err(e);
            }
            for m in modes {
                rows.push(TrialSummary {
                    condition: m.as_str().to_string(),
                    seed,
                    outcome: "skipped".into(),
                    elapsed: 0.0,
                    path_length: None,
                    mean_speed: None,
                });
            }
            continue;
        }
        for m in modes {
            let record = run_tunnel_trial(&setup, m, seed)?;
            if let Some(dir) = &out {
                record.write_timeline_csv(trial_file(dir, m.as_str(), seed)?)?;
            }
            rows.push(TrialSummary {
                condition: m.as_str().to_string(),
                seed,
                outcome: record.outcome.as_str().to_string(),
                elapsed: record.elapsed,
                path_length: Some(record.path_length),
                mean_speed: Some(record.mean_speed),
            });
        }
    }
    finish(cfg, &names, rows, out.as_deref())
}

fn finish(
    cfg: &ExperimentConfig,
    names: &[String],
    rows: Vec<TrialSummary>,
    out: Option<&Path>,
) -> Result<ExperimentSummary> {
    let summary = ExperimentSummary::new(cfg.scenario, cfg.base_seed, names, rows);
    if let Some(dir) = out {
        summary.write_to_dir(dir)?;
    }
    Ok(summary)
}
