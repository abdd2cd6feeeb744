// The indentation sweep at three speeds, with per-speed and pooled fits.

use tactile_antenna::harness::{run_calibration_sweep, ExperimentConfig, Scenario};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let mut cfg = ExperimentConfig::for_scenario(Scenario::CalibrationSweep);
    cfg.calibration.depth_steps = 30;
    let report = run_calibration_sweep(&cfg)?;
    println!("{} sweep points", report.sweep.len());
    for f in &report.fits {
        let label = f.speed_cm_s.map_or("pooled".to_string(), |v| format!("{v} cm/s"));
        println!(
            "{label:<9} k_s {:6.3}  x_0 {:.4}  rms {:.4}  ({} points)",
            f.k_s, f.x_0, f.rms_residual, f.points
        );
    }
    println!("threshold theta = {}", report.calibration.theta);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
