// Drive the held controller with a scripted pair of bend levels and print
// the decision log as CSV.

use tactile_antenna::controller::{write_decision_log, ControllerConfig, ControllerState, Decision};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let cfg = ControllerConfig::default();
    let mut state = ControllerState::new();
    let mut log = Vec::new();
    let dt = 0.25;
    for i in 0..24 {
        let t = i as f64 * dt;
        // Quiet, then a left contact, then a head-on wall, then quiet again.
        let (b_l, b_r) = match t {
            t if t < 1.0 => (0.05, 0.08),
            t if t < 2.5 => (0.65, 0.20),
            t if t < 4.0 => (0.85, 0.80),
            _ => (0.10, 0.05),
        };
        let maneuver = state.step(b_l, b_r, t, &cfg)?;
        log.push(Decision { t, b_l, b_r, maneuver });
    }
    let mut out = Vec::new();
    write_decision_log(&mut out, &log)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
