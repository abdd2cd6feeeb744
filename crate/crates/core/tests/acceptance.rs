//! Acceptance criteria. Each test prints one PASS/FAIL line straight to
//! stdout, so the verdicts show up even when output capture is on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactile_antenna::controller::{decide, ControllerConfig, ControllerState};
use tactile_antenna::gait::Maneuver;
use tactile_antenna::geometry::{Pose, Vec2};
use tactile_antenna::harness::{run_boulder_wall, run_tunnel, ExperimentConfig, Scenario};
use tactile_antenna::mechanics::{
    catalogue_stiffness_nmm_per_deg, torsion_stiffness, AntennaConfig, EquilibriumSolver, PointLoad, ProfileKind,
    SpringSpec, StiffnessProfile,
};
use tactile_antenna::sensing::{
    bend_level, contact_state, emulate_adc, fit_calibration, AveragingWindow, Calibration, SensorModel, SweepPoint,
    DEFAULT_AVERAGING_SPAN,
};
use tactile_antenna::world::Environment;

fn report(id: u32, name: &str, pass: bool, elapsed: Duration, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {id} [{verdict}] {name} ({:.2} s): {detail}\n",
        elapsed.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn criterion_1_spring_ratios() {
    let start = Instant::now();
    let spec = SpringSpec {
        youngs_modulus: 207e9,
        wire_diameter: 0.2e-3,
        coil_diameter: 1.5e-3,
        active_coils: 3,
    };
    let k = |n| torsion_stiffness(&spec.with_coils(n)).unwrap();
    let (r6, r9) = (k(3) / k(6), k(3) / k(9));
    let table = |n| catalogue_stiffness_nmm_per_deg(n).unwrap();
    let (t6, t9) = (table(3) / table(6), table(3) / table(9));
    let elapsed = start.elapsed();
    let pass = rel(r6, 2.0) < 1e-12
        && rel(r9, 3.0) < 1e-12
        && rel(r6, t6) < 0.015
        && rel(r9, t9) < 0.015
        && (table(3), table(6), table(9)) == (0.274, 0.137, 0.091)
        && elapsed < Duration::from_secs(1);
    report(
        1,
        "spring stiffness ratios",
        pass,
        elapsed,
        &format!("k3/k6 {r6:.4} vs table {t6:.4}, k3/k9 {r9:.4} vs table {t9:.4} (tol 1.5%)"),
    );
    assert!(pass);
}

/// One sweep point per level on an even grid. Each point is the averaged
/// count the sensor pipeline reports: raw samples taken at the sampling
/// rate until the averaging window is full.
fn synthetic_sweep(model: &SensorModel, truth: &Calibration, window: usize, rng: &mut ChaCha8Rng) -> Vec<SweepPoint> {
    let dt = model.sample_period();
    (0..=96)
        .map(|i| {
            let b = 0.02 + 0.96 * i as f64 / 96.0;
            let mut avg = AveragingWindow::new(window as f64 * dt).unwrap();
            let mut out = 0.0;
            for n in 0..window {
                let raw = emulate_adc(b * model.bend_at_full, model, truth, rng);
                out = avg.push(f64::from(raw), n as f64 * dt).unwrap();
            }
            SweepPoint {
                avg_adc: out,
                ref_bend: b,
            }
        })
        .collect()
}

#[test]
fn criterion_2_calibration_round_trip() {
    let start = Instant::now();
    let truth = Calibration::new(18.3, 0.305, 0.5).unwrap();
    let quiet = SensorModel {
        noise_std: 0.0,
        ..SensorModel::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let span = (DEFAULT_AVERAGING_SPAN * quiet.sample_rate).round() as usize;
    let fit = fit_calibration(&synthetic_sweep(&quiet, &truth, span, &mut rng), 4095.0).unwrap();
    let clean = (rel(fit.k_s, 18.3), rel(fit.x_0, 0.305));

    let noisy = SensorModel {
        noise_std: 0.01 * 4095.0,
        ..SensorModel::default()
    };
    let worst_over_seeds = |window: usize| {
        let mut worst = (0.0f64, 0.0f64);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = fit_calibration(&synthetic_sweep(&noisy, &truth, window, &mut rng), 4095.0).unwrap();
            worst = (worst.0.max(rel(f.k_s, 18.3)), worst.1.max(rel(f.x_0, 0.305)));
        }
        worst
    };
    let worst = worst_over_seeds(span);
    let raw = worst_over_seeds(1);
    let elapsed = start.elapsed();
    let pass =
        clean.0 < 1e-3 && clean.1 < 1e-3 && worst.0 < 0.05 && worst.1 < 0.05 && elapsed < Duration::from_secs(10);
    report(
        2,
        "calibration fit round trip",
        pass,
        elapsed,
        &format!(
            "noiseless err k_s {:.1e} x_0 {:.1e} (tol 1e-3); 1% noise, {span}-sample average, worst of 50 \
             k_s {:.2}% x_0 {:.2}% (tol 5%); unaveraged for reference k_s {:.2}% x_0 {:.2}%",
            clean.0,
            clean.1,
            100.0 * worst.0,
            100.0 * worst.1,
            100.0 * raw.0,
            100.0 * raw.1
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_mechanics_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let solver = EquilibriumSolver::default();
    let (mut worst_rel, mut worst_residual, mut max_bend) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let coils: Vec<u32> = (0..6).map(|_| [3, 6, 9][rng.random_range(0..3)]).collect();
        let config = AntennaConfig::with_profile(StiffnessProfile::from_coils(&coils, ProfileKind::Custom).unwrap());
        let levers = config.lever_arms();
        let k = config.profile.joint_stiffness().to_vec();
        // Largest tip force whose linear response stays under 5 degrees in total.
        let limit = 5f64.to_radians() / levers.iter().zip(&k).map(|(l, k)| l / k).sum::<f64>();
        let f = limit * rng.random_range(0.05..0.95) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let heading = rng.random_range(-3.0..3.0);
        let base = Pose::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), heading);
        let load = PointLoad::at_tip(&config, Vec2::from_angle(heading).perp() * f);
        let s = solver
            .solve_from(&config, &base, &Environment::empty(), &[load], None)
            .unwrap();
        max_bend = max_bend.max(s.total_bend);
        worst_residual = worst_residual.max(s.residual);
        for j in 0..6 {
            worst_rel = worst_rel.max(rel(s.joint_deflections[j], f * levers[j] / k[j]));
        }
    }
    let elapsed = start.elapsed();
    let pass =
        max_bend < 5f64.to_radians() && worst_rel < 0.01 && worst_residual < 1e-6 && elapsed < Duration::from_secs(30);
    report(
        3,
        "mechanics small-angle oracle",
        pass,
        elapsed,
        &format!(
            "50 cases, max bend {:.2} deg, worst joint error {:.3}% (tol 1%), worst residual {worst_residual:.1e} N*m (tol 1e-6)",
            max_bend.to_degrees(),
            100.0 * worst_rel
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_boulder_ordering() {
    let start = Instant::now();
    let cfg = ExperimentConfig::for_scenario(Scenario::BoulderWall);
    let s = run_boulder_wall(&cfg).unwrap();
    let elapsed = start.elapsed();
    let d = s.condition("descending").unwrap();
    let stiff = s.condition("uniform_stiff").unwrap();
    let soft = s.condition("uniform_compliant").unwrap();
    let pass = cfg.trials == 20
        && d.trials == 20
        && d.success_rate >= stiff.success_rate
        && d.success_rate >= soft.success_rate
        && 2 * stiff.jam > stiff.failures()
        && 2 * soft.missed_contact > soft.failures()
        && elapsed < Duration::from_secs(120);
    report(
        4,
        "boulder-wall profile ordering",
        pass,
        elapsed,
        &format!(
            "success descending {}/20, stiff {}/20 (jam {} of {} failures), compliant {}/20 (missed {} of {} failures)",
            d.successes,
            stiff.successes,
            stiff.jam,
            stiff.failures(),
            soft.successes,
            soft.missed_contact,
            soft.failures()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_tunnel_ordering() {
    let start = Instant::now();
    let cfg = ExperimentConfig::for_scenario(Scenario::Tunnel);
    let s = run_tunnel(&cfg).unwrap();
    let elapsed = start.elapsed();
    let closed = s.condition("closed_loop").unwrap();
    let open = s.condition("open_loop").unwrap();
    let speeds = (closed.mean_speed.unwrap_or(0.0), open.mean_speed.unwrap_or(0.0));
    let pass = cfg.trials == 10
        && closed.successes > open.successes
        && speeds.0 > speeds.1
        && elapsed < Duration::from_secs(300);
    report(
        5,
        "tunnel closed vs open loop",
        pass,
        elapsed,
        &format!(
            "success closed {}/{} open {}/{} (skipped {}), mean speed closed {:.3} m/s open {:.3} m/s",
            closed.successes, closed.trials, open.successes, open.trials, closed.skipped, speeds.0, speeds.1
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_controller_properties() {
    let start = Instant::now();
    let cfg = ControllerConfig::default();
    let grid: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
    let (mut mirror, mut tokens, mut hold, mut replay) = (0, 0, 0, 0);

    for &b_l in &grid {
        for &b_r in &grid {
            let m = decide(b_l, b_r, &cfg).unwrap();
            if !Maneuver::ALL.contains(&m) {
                tokens += 1;
            }
            if b_l != b_r && decide(b_r, b_l, &cfg).unwrap() != m.mirrored() {
                mirror += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2000 {
        let mut state = ControllerState::new();
        let t0 = rng.random_range(0.0..100.0);
        let chosen = state.step(rng.random(), rng.random(), t0, &cfg).unwrap();
        let mut t = t0;
        loop {
            t += rng.random_range(0.0..0.2);
            if t - t0 >= cfg.t_hold {
                break;
            }
            if state.step(rng.random(), rng.random(), t, &cfg).unwrap() != chosen {
                hold += 1;
            }
        }
    }

    let frames: Vec<(f64, f64)> = (0..5000).map(|_| (rng.random(), rng.random())).collect();
    let run = || {
        let mut s = ControllerState::new();
        frames
            .iter()
            .enumerate()
            .map(|(i, (l, r))| s.step(*l, *r, i as f64 * 0.01, &cfg).unwrap())
            .collect::<Vec<_>>()
    };
    let first = run();
    for _ in 0..5 {
        if run() != first {
            replay += 1;
        }
    }

    let elapsed = start.elapsed();
    let total = mirror + tokens + hold + replay;
    let pass = total == 0 && elapsed < Duration::from_secs(10);
    report(
        6,
        "controller properties",
        pass,
        elapsed,
        &format!(
            "violations: mirror {mirror}, exhaustiveness {tokens} (200x200 grid), hold {hold}, determinism {replay}"
        ),
    );
    assert!(pass);
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "csv") {
                let key = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(key, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_7_end_to_end_determinism() {
    let start = Instant::now();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut ok = true;
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_antenna-lab"))
            .args(["tunnel", "--seed", "42", "--trials", "3", "--out"])
            .arg(dir.path())
            .output()
            .unwrap()
            .status;
        ok &= status.success();
    }
    let elapsed = start.elapsed();
    let (a, b) = (csv_files(dirs[0].path()), csv_files(dirs[1].path()));
    let per_trial = a.keys().filter(|k| k.starts_with("trials")).count();
    let pass = ok && a.contains_key("summary.csv") && per_trial == 6 && a == b && elapsed < Duration::from_secs(120);
    report(
        7,
        "tunnel --seed 42 --trials 3 reproducibility",
        pass,
        elapsed,
        &format!(
            "{} CSV files ({per_trial} per-trial), byte-identical: {}",
            a.len(),
            a == b
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_sensing_invariants() {
    let start = Instant::now();
    let model = SensorModel {
        noise_std: 0.0,
        ..SensorModel::default()
    };
    let cal = Calibration::default();
    let fs = model.full_scale_f64();

    let levels: Vec<f64> = (0..1000)
        .map(|i| bend_level(fs * i as f64 / 999.0, &cal, &model))
        .collect();
    let monotone = levels
        .windows(2)
        .filter(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Greater))
        .count();

    // Half a count of rounding through the steepest part of the sigmoid.
    let bound = 0.5 / fs * cal.k_s / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for i in 0..=980 {
        let b = 0.01 + i as f64 / 1000.0;
        let raw = emulate_adc(b * model.bend_at_full, &model, &cal, &mut rng);
        worst = worst.max((bend_level(f64::from(raw), &cal, &model) - b).abs());
    }
    let boundary = contact_state(cal.theta, &cal);
    let elapsed = start.elapsed();
    let pass = monotone == 0 && worst <= bound && boundary && elapsed < Duration::from_secs(1);
    report(
        8,
        "sensing invariants",
        pass,
        elapsed,
        &format!(
            "monotonicity violations {monotone}/999, worst round-trip error {worst:.2e} (bound {bound:.2e}), contact at b = theta: {boundary}"
        ),
    );
    assert!(pass);
}
