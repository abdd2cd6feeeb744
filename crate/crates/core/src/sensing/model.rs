use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flex-sensor and ADC front end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorModel {
    pub adc_bits: u32,
    pub full_scale: u32,
    /// Standard deviation of additive ADC noise, in counts.
    pub noise_std: f64,
    /// Sampling rate (Hz).
    pub sample_rate: f64,
    /// Total antenna bend (rad) at which the reference bend level reaches 1
    /// and the emulated ADC saturates low.
    pub bend_at_full: f64,
}

impl Default for SensorModel {
    fn default() -> Self {
        SensorModel {
            adc_bits: 12,
            full_scale: 4095,
            noise_std: 8.0,
            sample_rate: 100.0,
            bend_at_full: 22f64.to_radians(),
        }
    }
}

impl SensorModel {
    pub fn validate(&self) -> Result<()> {
        if self.adc_bits == 0 || self.adc_bits > 24 {
            return Err(Error::InvalidInput(format!("unsupported ADC width {}", self.adc_bits)));
        }
        if self.full_scale != (1u32 << self.adc_bits) - 1 {
            return Err(Error::InvalidInput(format!(
                "{}-bit ADC must have full scale {}",
                self.adc_bits,
                (1u32 << self.adc_bits) - 1
            )));
        }
        if !(self.noise_std >= 0.0) || !(self.sample_rate > 0.0) || !(self.bend_at_full > 0.0) {
            return Err(Error::InvalidInput(
                "noise must be >= 0, sample rate and bend_at_full > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn sample_period(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn full_scale_f64(&self) -> f64 {
        f64::from(self.full_scale)
    }

    /// Ground-truth bend level in [0, 1] for a total antenna bend.
    pub fn reference_level(&self, total_bend: f64) -> f64 {
        (total_bend.abs() / self.bend_at_full).clamp(0.0, 1.0)
    }
}

/// Sigmoid calibration from normalised ADC reading to bend level, plus the
/// binary contact threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub k_s: f64,
    /// Midpoint as a fraction of ADC full scale.
    pub x_0: f64,
    pub theta: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            k_s: 18.3,
            x_0: 0.305,
            theta: 0.5,
        }
    }
}

impl Calibration {
    pub fn new(k_s: f64, x_0: f64, theta: f64) -> Result<Self> {
        let c = Calibration { k_s, x_0, theta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_s > 0.0 && self.k_s.is_finite()) {
            return Err(Error::InvalidInput(format!("k_s must be > 0, got {}", self.k_s)));
        }
        if !(self.x_0 > 0.0 && self.x_0 < 1.0) {
            return Err(Error::InvalidInput(format!("x_0 must lie in (0, 1), got {}", self.x_0)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidInput(format!(
                "theta must lie in (0, 1), got {}",
                self.theta
            )));
        }
        Ok(())
    }

    /// Decreasing sigmoid of the normalised reading `x`.
    pub fn level_at(&self, x: f64) -> f64 {
        1.0 / (1.0 + (self.k_s * (x - self.x_0)).exp())
    }

    /// Normalised reading that maps to level `b`; infinite at 0 and 1.
    pub fn reading_for(&self, b: f64) -> f64 {
        self.x_0 + ((1.0 - b) / b).ln() / self.k_s
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Calibration = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }
}

/// Emulated raw ADC count for a given total bend: the reference bend level
/// is pushed through the inverse calibration (more bend, lower count),
/// perturbed by Gaussian noise, clamped and quantised.
pub fn emulate_adc<R: Rng + ?Sized>(total_bend: f64, model: &SensorModel, calib: &Calibration, rng: &mut R) -> u32 {
    let b = model.reference_level(total_bend);
    let fs = model.full_scale_f64();
    let clean = (calib.reading_for(b) * fs).clamp(0.0, fs);
    let noise = if model.noise_std > 0.0 {
        Normal::new(0.0, model.noise_std)
            .expect("noise std validated")
            .sample(rng)
    } else {
        0.0
    };
    (clean + noise).round().clamp(0.0, fs) as u32
}

/// Bend level in [0, 1] from an averaged count.
pub fn bend_level(averaged: f64, calib: &Calibration, model: &SensorModel) -> f64 {
    calib.level_at(averaged / model.full_scale_f64())
}

/// Binary contact: level at or above the threshold.
pub fn contact_state(b: f64, calib: &Calibration) -> bool {
    b >= calib.theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quiet() -> SensorModel {
        SensorModel {
            noise_std: 0.0,
            ..SensorModel::default()
        }
    }

    #[test]
    fn midpoint_level_maps_to_midpoint_count() {
        let m = quiet();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bend = 0.5 * m.bend_at_full;
        assert_eq!(emulate_adc(bend, &m, &Calibration::default(), &mut rng), 1249);
    }

    #[test]
    fn zero_bend_reads_full_scale() {
        let m = quiet();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(emulate_adc(0.0, &m, &Calibration::default(), &mut rng), 4095);
        assert_eq!(emulate_adc(10.0, &m, &Calibration::default(), &mut rng), 0);
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let m = SensorModel::default();
        let c = Calibration::default();
        let a: Vec<u32> = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..50)
                .map(|i| emulate_adc(i as f64 * 0.01, &m, &c, &mut rng))
                .collect()
        };
        let b: Vec<u32> = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..50)
                .map(|i| emulate_adc(i as f64 * 0.01, &m, &c, &mut rng))
                .collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn level_endpoints() {
        let m = SensorModel::default();
        let c = Calibration::default();
        assert!((bend_level(0.305 * 4095.0, &c, &m) - 0.5).abs() < 1e-12);
        // 1 / (1 + e^(-18.3 * 0.305))
        assert!((bend_level(0.0, &c, &m) - 0.996_247_2).abs() < 1e-6);
        // 1 / (1 + e^(18.3 * 0.695))
        assert!((bend_level(4095.0, &c, &m) - 2.995_2e-6).abs() < 1e-9);
    }

    #[test]
    fn contact_threshold_is_inclusive() {
        let c = Calibration::default();
        assert!(contact_state(c.theta, &c));
        assert!(!contact_state(0.0, &c));
        assert!(contact_state(1.0, &c));
    }

    #[test]
    fn calibration_toml_round_trip() {
        let c = Calibration::new(17.5, 0.31, 0.45).unwrap();
        let text = c.to_toml().unwrap();
        assert!(text.contains("k_s") && text.contains("x_0") && text.contains("theta"));
        assert_eq!(Calibration::from_toml(&text).unwrap(), c);
        assert!(Calibration::from_toml("k_s = 1.0\nx_0 = 1.5\ntheta = 0.5\n").is_err());
    }

    #[test]
    fn model_validation() {
        assert!(SensorModel::default().validate().is_ok());
        let bad = SensorModel {
            full_scale: 1023,
            ..SensorModel::default()
        };
        assert!(bad.validate().is_err());
    }
}
