use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tactile_antenna::harness::{
    run_boulder_wall, run_calibration_sweep, run_tunnel, ExperimentConfig, ExperimentSummary, Scenario,
};
use tactile_antenna::Error;

#[derive(Parser)]
#[command(name = "antenna-lab", about = "Run seeded tactile-antenna experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Indentation sweep at several speeds and a sigmoid calibration fit.
    Calibrate(RunArgs),
    /// Boulder-wall robustness test across stiffness profiles.
    BoulderWall(RunArgs),
    /// Closed-loop against open-loop traversal of a cluttered tunnel.
    Tunnel(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML); defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; trial i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(scenario: Scenario, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_toml_for(scenario, &text)?
        }
        None => ExperimentConfig::for_scenario(scenario),
    };
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if args.out.is_some() {
        cfg.out.clone_from(&args.out);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_summary(summary: &ExperimentSummary) {
    for c in &summary.conditions {
        let speed = c.mean_speed.map_or("-".to_string(), |v| format!("{v:.3} m/s"));
        println!(
            "{:<18} {:>3}/{:<3} success ({:.0}%)  speed {speed}  skipped {}",
            c.condition,
            c.successes,
            c.trials,
            100.0 * c.success_rate,
            c.skipped
        );
    }
}

fn run(command: &Command) -> Result<(), Error> {
    match command {
        Command::Calibrate(args) => {
            let cfg = load(Scenario::CalibrationSweep, args)?;
            let report = run_calibration_sweep(&cfg)?;
            for f in &report.fits {
                let label = f.speed_cm_s.map_or("pooled".to_string(), |v| format!("{v} cm/s"));
                println!(
                    "{label:<10} k_s {:.3}  x_0 {:.4}  rms {:.2e}  n {}",
                    f.k_s, f.x_0, f.rms_residual, f.points
                );
            }
        }
        Command::BoulderWall(args) => print_summary(&run_boulder_wall(&load(Scenario::BoulderWall, args)?)?),
        Command::Tunnel(args) => print_summary(&run_tunnel(&load(Scenario::Tunnel, args)?)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
