use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Torsional stiffness units used in spring catalogues: N*mm per degree.
pub fn nmm_per_deg_to_si(value: f64) -> f64 {
    value * 1e-3 / 1f64.to_radians()
}

pub fn si_to_nmm_per_deg(value: f64) -> f64 {
    value * 1e3 * 1f64.to_radians()
}

/// Close-coiled helical torsion spring geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpringSpec {
    /// Young's modulus (Pa).
    pub youngs_modulus: f64,
    /// Wire diameter (m).
    pub wire_diameter: f64,
    /// Mean coil diameter (m).
    pub coil_diameter: f64,
    pub active_coils: u32,
}

impl SpringSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")))
            }
        };
        positive("youngs_modulus", self.youngs_modulus)?;
        positive("wire_diameter", self.wire_diameter)?;
        positive("coil_diameter", self.coil_diameter)?;
        if self.active_coils == 0 {
            return Err(Error::InvalidSpec("active_coils must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_coils(self, active_coils: u32) -> Self {
        SpringSpec { active_coils, ..self }
    }
}

/// Torsional stiffness in N*m/rad.
///
/// `E d^4 / (10.8 D N)` is the classic design formula whose result is a
/// torque per full turn; dividing by 2*pi gives the per-radian rate.
pub fn torsion_stiffness(spec: &SpringSpec) -> Result<f64> {
    spec.validate()?;
    let per_turn =
        spec.youngs_modulus * spec.wire_diameter.powi(4) / (10.8 * spec.coil_diameter * f64::from(spec.active_coils));
    Ok(per_turn / TAU)
}
