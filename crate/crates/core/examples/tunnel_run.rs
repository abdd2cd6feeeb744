// One tunnel, closed loop and open loop, with the closed-loop timeline
// written to a CSV file.

use tactile_antenna::harness::{run_tunnel_trial, ControlMode, TunnelSetup};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let setup = TunnelSetup::default();
    let seed = 3;
    let tunnel = setup.layout.build(seed)?;
    println!(
        "tunnel seed {seed}: {} obstacles, turn {}",
        tunnel.env.obstacles.len(),
        if tunnel.turn_sign > 0.0 { "left" } else { "right" }
    );
    for mode in [ControlMode::ClosedLoop, ControlMode::OpenLoop] {
        let record = run_tunnel_trial(&setup, mode, seed)?;
        println!(
            "{:<12} {:<8} {:6.2} s  path {:.2} m  speed {:.3} m/s",
            mode.as_str(),
            record.outcome.as_str(),
            record.elapsed,
            record.path_length,
            record.mean_speed
        );
        if mode == ControlMode::ClosedLoop {
            let path = std::env::temp_dir().join("tunnel_closed_loop.csv");
            let file = std::fs::File::create(&path).map_err(|e| tactile_antenna::Error::io(&path, e))?;
            record.write_timeline_csv(file)?;
            println!("  timeline: {}", path.display());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
