// Fit the sigmoid calibration to a synthetic noisy sweep and print it as TOML.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactile_antenna::sensing::{
    emulate_adc, fit_calibration, read_sweep_csv, write_sweep_csv, Calibration, SensorModel, SweepPoint,
};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let model = SensorModel {
        noise_std: 0.01 * 4095.0,
        ..SensorModel::default()
    };
    let truth = Calibration::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let points: Vec<SweepPoint> = (0..200)
        .map(|_| {
            let b: f64 = rng.random_range(0.02..0.98);
            let bend = b * model.bend_at_full;
            let raw = emulate_adc(bend, &model, &truth, &mut rng);
            SweepPoint {
                avg_adc: f64::from(raw),
                ref_bend: b,
            }
        })
        .collect();

    let mut csv = Vec::new();
    write_sweep_csv(&mut csv, &points)?;
    let reloaded = read_sweep_csv(csv.as_slice())?;

    let fit = fit_calibration(&reloaded, model.full_scale_f64())?;
    println!(
        "fit: k_s = {:.3} (true {}), x_0 = {:.4} (true {}), rms {:.4}, {} iterations",
        fit.k_s, truth.k_s, fit.x_0, truth.x_0, fit.rms_residual, fit.iterations
    );
    println!("{}", fit.calibration(0.5)?.to_toml()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
