// Feed a bend ramp on the left antenna through the ADC, averaging window
// and calibration, and watch the contact flag switch on.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tactile_antenna::sensing::{Calibration, SensorModel, SensorPipeline, DEFAULT_AVERAGING_SPAN};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let model = SensorModel::default();
    let mut pipeline = SensorPipeline::new(model, Calibration::default(), DEFAULT_AVERAGING_SPAN)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dt = model.sample_period();

    println!("   t   bend_L  raw_L   avg_L    b_L  contact_L  b_R");
    for i in 0..=100 {
        let t = i as f64 * dt;
        // Left antenna bends linearly to full scale over one second.
        let bend_left = model.bend_at_full * t;
        let frame = pipeline.sample(t, bend_left, 0.0, &mut rng)?;
        if i % 10 == 0 {
            println!(
                "{t:4.2}  {:6.2}  {:5}  {:6.1}  {:5.3}  {:>9}  {:4.2}",
                bend_left.to_degrees(),
                frame.left.raw,
                frame.left.averaged,
                frame.left.bend,
                frame.left.contact,
                frame.right.bend
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
