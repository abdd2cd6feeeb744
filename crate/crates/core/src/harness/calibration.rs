//! Indentation sweep for the bend-sensor calibration.
//!
//! A round indenter moves across the antenna in steps of depth. At each
//! depth it dwells until the averaging window holds only settled samples,
//! and one point (averaged count, reference level) is recorded. The
//! traverse speed sets how fast the indenter moves between depths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec2};
use crate::mechanics::{AntennaConfig, EquilibriumSolver, SolverOptions};
use crate::sensing::{emulate_adc, fit_calibration, AveragingWindow, Calibration, CalibrationFit, SweepPoint};
use crate::world::{Environment, Obstacle};

use super::config::{ExperimentConfig, Scenario};
use super::experiments::prepare_output;
use super::summary::write_rows;

/// One recorded sweep point, labelled by traverse speed and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub speed_cm_s: f64,
    pub seed: u64,
    pub avg_adc: f64,
    pub ref_bend: f64,
}

/// Fit of one sweep series; `speed_cm_s` is absent for the pooled fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitRow {
    pub series: &'static str,
    pub speed_cm_s: Option<f64>,
    pub points: usize,
    pub k_s: f64,
    pub x_0: f64,
    pub rms_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    /// Pooled fit over all speeds with the controller's contact threshold.
    pub calibration: Calibration,
    pub fits: Vec<FitRow>,
    pub sweep: Vec<SweepRow>,
}

impl CalibrationReport {
    pub fn fit_for_speed(&self, speed_cm_s: f64) -> Option<&FitRow> {
        self.fits.iter().find(|f| f.speed_cm_s == Some(speed_cm_s))
    }
}

fn sweep_series(cfg: &ExperimentConfig, speed_cm_s: f64, stream: u64, seed: u64) -> Result<Vec<SweepRow>> {
    let cal = &cfg.calibration;
    let profile = match cfg.profiles.first() {
        Some(p) => p.resolve()?,
        None => return Err(Error::Config("no stiffness profile configured".into())),
    };
    let config = AntennaConfig::with_profile(profile);
    let sensor = cfg.sensing.model();
    let generator = cfg.sensing.calibration(cfg.controller.theta);
    let solver = EquilibriumSolver::new(SolverOptions::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut window = AveragingWindow::new(cfg.sensing.averaging_span)?;

    let station = cal.station * config.total_length();
    let r = cal.indenter_radius;
    // Depth d puts the indenter surface d below the undeflected axis.
    let place = |d: f64| Environment::empty().with_obstacle(Obstacle::circle(Vec2::new(station, r - d), r));
    let dt = sensor.sample_period();
    let speed = speed_cm_s * 0.01;
    let dwell = (cfg.sensing.averaging_span / dt).ceil() as usize + 1;
    let [d0, d1] = cal.depth_range;
    let step = (d1 - d0) / (cal.depth_steps - 1) as f64;

    let base = Pose::new(0.0, 0.0, 0.0);
    let mut warm = vec![0.0; config.joints()];
    let mut t = 0.0;
    let mut depth = d0;
    let mut rows = Vec::with_capacity(cal.depth_steps);
    for level in 0..cal.depth_steps {
        let target = d0 + step * level as f64;
        let transit = ((target - depth).abs() / speed / dt).ceil() as usize;
        let from = depth;
        for i in 1..=transit + dwell {
            let frac = (i as f64 / transit.max(1) as f64).min(1.0);
            depth = from + (target - from) * frac;
            let state = solver.solve_from(&config, &base, &place(depth), &[], Some(&warm))?;
            warm.clone_from(&state.joint_deflections);
            let raw = emulate_adc(state.total_bend, &sensor, &generator, &mut rng);
            let avg = window.push(f64::from(raw), t)?;
            t += dt;
            if i == transit + dwell {
                rows.push(SweepRow {
                    speed_cm_s,
                    seed,
                    avg_adc: avg,
                    ref_bend: sensor.reference_level(state.total_bend),
                });
            }
        }
    }
    Ok(rows)
}

fn fit_rows(rows: &[&SweepRow], cfg: &ExperimentConfig) -> Result<(usize, CalibrationFit)> {
    let [lo, hi] = cfg.calibration.fit_band;
    let points: Vec<SweepPoint> = rows
        .iter()
        .filter(|r| r.ref_bend >= lo && r.ref_bend <= hi)
        .map(|r| SweepPoint {
            avg_adc: r.avg_adc,
            ref_bend: r.ref_bend,
        })
        .collect();
    let fit = fit_calibration(&points, cfg.sensing.model().full_scale_f64())?;
    Ok((points.len(), fit))
}

/// Sweeps the indenter at every configured speed, fits each series and the
/// pooled data, and persists the pooled calibration. When an output
/// directory is set the sweep CSV is written before fitting, so it
/// survives a failed fit.
pub fn run_calibration_sweep(cfg: &ExperimentConfig) -> Result<CalibrationReport> {
    if cfg.scenario != Scenario::CalibrationSweep {
        return Err(Error::Config(format!(
            "expected a calibration_sweep config, got {}",
            cfg.scenario.as_str()
        )));
    }
    cfg.validate()?;
    let out = prepare_output(cfg)?;

    let speeds = &cfg.calibration.speeds_cm_s;
    let mut sweep = Vec::new();
    for (stream, &speed) in speeds.iter().enumerate() {
        for seed in cfg.seeds() {
            sweep.extend(sweep_series(cfg, speed, stream as u64, seed)?);
        }
    }
    if let Some(dir) = &out {
        let path = dir.join("sweep.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_rows(file, &sweep, "<sweep>")?;
    }

    let mut fits = Vec::new();
    for &speed in speeds {
        let rows: Vec<&SweepRow> = sweep.iter().filter(|r| r.speed_cm_s == speed).collect();
        let (points, fit) = fit_rows(&rows, cfg)?;
        fits.push(FitRow {
            series: "speed",
            speed_cm_s: Some(speed),
            points,
            k_s: fit.k_s,
            x_0: fit.x_0,
            rms_residual: fit.rms_residual,
        });
    }
    let (points, pooled) = fit_rows(&sweep.iter().collect::<Vec<_>>(), cfg)?;
    fits.push(FitRow {
        series: "pooled",
        speed_cm_s: None,
        points,
        k_s: pooled.k_s,
        x_0: pooled.x_0,
        rms_residual: pooled.rms_residual,
    });
    let calibration = pooled.calibration(cfg.controller.theta)?;

    if let Some(dir) = &out {
        let path = dir.join("summary.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_rows(file, &fits, "<fits>")?;
        calibration.save(dir.join("calibration.toml"))?;
    }
    Ok(CalibrationReport {
        calibration,
        fits,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::for_scenario(Scenario::CalibrationSweep);
        cfg.sensing.noise_std = 0.0;
        cfg
    }

    #[test]
    fn noiseless_sweep_recovers_the_generator() {
        let report = run_calibration_sweep(&quiet()).unwrap();
        assert_eq!(report.fits.len(), 4);
        for f in &report.fits {
            assert!((f.k_s / 18.3 - 1.0).abs() < 1e-3, "{f:?}");
            assert!((f.x_0 / 0.305 - 1.0).abs() < 1e-3, "{f:?}");
        }
    }

    #[test]
    fn three_labelled_series() {
        let report = run_calibration_sweep(&quiet()).unwrap();
        for speed in [5.0, 10.0, 15.0] {
            let n = report.sweep.iter().filter(|r| r.speed_cm_s == speed).count();
            assert_eq!(n, report.sweep.len() / 3);
        }
    }

    #[test]
    fn failed_fit_still_leaves_the_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = quiet();
        // Too shallow to bend the antenna into the transition.
        cfg.calibration.depth_range = [-0.005, 0.002];
        cfg.out = Some(dir.path().to_path_buf());
        assert!(matches!(run_calibration_sweep(&cfg), Err(Error::FitFailure(_))));
        assert!(dir.path().join("sweep.csv").exists());
        assert!(!dir.path().join("calibration.toml").exists());
    }
}
