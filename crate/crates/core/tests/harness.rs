use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use tactile_antenna::harness::{
    run_boulder_wall, run_tunnel, ConditionSummary, ExperimentConfig, Scenario, TrialSummary,
};

/// Every file under `dir`, keyed by relative path.
fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let key = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(key, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

const OUTCOMES: [&str; 7] = [
    "success",
    "jam",
    "missed_contact",
    "solver_failure",
    "stuck",
    "timeout",
    "skipped",
];

proptest! {
    #[test]
    fn summary_counts_add_up(outcomes in prop::collection::vec(0usize..7, 0..60)) {
        let rows: Vec<TrialSummary> = outcomes
            .iter()
            .enumerate()
            .map(|(i, &o)| TrialSummary {
                condition: "c".into(),
                seed: i as u64,
                outcome: OUTCOMES[o].into(),
                elapsed: 1.0,
                path_length: Some(0.1),
                mean_speed: Some(0.1),
            })
            .collect();
        let s = ConditionSummary::from_trials("c", &rows);
        let skipped = outcomes.iter().filter(|&&o| o == 6).count();
        prop_assert_eq!(s.trials, outcomes.len() - skipped);
        prop_assert_eq!(s.skipped, skipped);
        prop_assert_eq!(s.successes + s.jam + s.missed_contact + s.solver_failure + s.stuck + s.timeout, s.trials);
        if s.trials > 0 {
            prop_assert_eq!(s.success_rate, s.successes as f64 / s.trials as f64);
            // Rate times trials can be one ulp off the integer, never more.
            let back = s.success_rate * s.trials as f64;
            prop_assert_eq!(back.round(), s.successes as f64);
            prop_assert!((back - s.successes as f64).abs() <= f64::EPSILON * s.trials as f64);
        }
    }
}

#[test]
fn boulder_runs_are_reproducible_on_disk() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut cfg = ExperimentConfig::for_scenario(Scenario::BoulderWall);
    cfg.trials = 3;
    cfg.base_seed = 11;
    for dir in [&a, &b] {
        cfg.out = Some(dir.path().to_path_buf());
        run_boulder_wall(&cfg).unwrap();
    }
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert!(sa.contains_key("summary.csv") && sa.contains_key("config.snapshot"));
    assert!(sa.contains_key("trials/descending/11.csv"));
    assert_eq!(sa, sb);
}

#[test]
fn tunnel_modes_share_seeds() {
    let mut cfg = ExperimentConfig::for_scenario(Scenario::Tunnel);
    cfg.trials = 2;
    cfg.base_seed = 5;
    let s = run_tunnel(&cfg).unwrap();
    let seeds = |c: &str| {
        s.trials
            .iter()
            .filter(|t| t.condition == c)
            .map(|t| t.seed)
            .collect::<Vec<_>>()
    };
    assert_eq!(seeds("closed_loop"), vec![5, 6]);
    assert_eq!(seeds("open_loop"), vec![5, 6]);
    for t in s.trials.iter().filter(|t| t.is_success()) {
        let speed = t.mean_speed.unwrap();
        assert!((speed - t.path_length.unwrap() / t.elapsed).abs() < 1e-12);
    }
}

#[test]
fn snapshot_reloads_to_the_same_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::for_scenario(Scenario::BoulderWall);
    cfg.trials = 1;
    cfg.boulder.boulder_count = 2;
    cfg.out = Some(dir.path().to_path_buf());
    run_boulder_wall(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("config.snapshot")).unwrap();
    let back = ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(back, ExperimentConfig { out: None, ..cfg });
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_antenna-lab"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn cli_rejects_bad_configs_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "scenario = \"tunnel\"\nbogus = 1\n"),
        ("negative.toml", "scenario = \"tunnel\"\n[tunnel]\nstuck_limit = -1.0\n"),
        ("tunnel_key.toml", "scenario = \"tunnel\"\n[tunnel]\nbogus = 1\n"),
        ("mismatch.toml", "scenario = \"boulder_wall\"\n"),
        ("syntax.toml", "scenario = \n"),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = cli(&["tunnel", "--config", path.to_str().unwrap(), "--trials", "1"]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
    let missing = dir.path().join("missing.toml");
    let out = cli(&["calibrate", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_zero_trials_is_a_config_error() {
    let out = cli(&["boulder-wall", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_boulder_wall_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "boulder-wall",
        "--seed",
        "3",
        "--trials",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(dir.path().join("trials/uniform_stiff/4.csv").exists());
}
