// A short boulder-wall comparison of the three stiffness profiles.

use tactile_antenna::harness::{run_boulder_wall, ExperimentConfig, Scenario};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let mut cfg = ExperimentConfig::for_scenario(Scenario::BoulderWall);
    cfg.trials = 4;
    let summary = run_boulder_wall(&cfg)?;
    for c in &summary.conditions {
        println!(
            "{:<18} {}/{} success  jam {}  missed {}",
            c.condition, c.successes, c.trials, c.jam, c.missed_contact
        );
    }
    for t in &summary.trials {
        println!("  {:<18} seed {:>2}  {}", t.condition, t.seed, t.outcome);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
