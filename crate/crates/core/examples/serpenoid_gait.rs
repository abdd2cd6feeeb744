// Joint-angle snapshots of the four maneuver templates.

use tactile_antenna::gait::{serpenoid_angles, GaitConfig, Maneuver};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let gait = GaitConfig::default();
    gait.validate()?;
    for m in Maneuver::ALL {
        let params = gait.template(m);
        println!("{m} (phi = {:+.2} rad, {:?})", params.phi, params.direction);
        for k in 0..4 {
            let t = k as f64 * params.period() / 4.0;
            let angles: Vec<String> = serpenoid_angles(t, &params)
                .iter()
                .map(|a| format!("{a:+.3}"))
                .collect();
            println!("  t = {t:.3} s  [{}]", angles.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
