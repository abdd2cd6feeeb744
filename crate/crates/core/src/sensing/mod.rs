//! Flex-sensor emulation and the signal chain from raw counts to binary
//! contact.

mod fit;
mod frame;
mod model;
mod window;

pub use fit::{fit_calibration, read_sweep_csv, write_sweep_csv, CalibrationFit, SweepPoint};
pub use frame::{SensorFrame, SensorPipeline, Side, SideChannel, DEFAULT_AVERAGING_SPAN};
pub use model::{bend_level, contact_state, emulate_adc, Calibration, SensorModel};
pub use window::AveragingWindow;
