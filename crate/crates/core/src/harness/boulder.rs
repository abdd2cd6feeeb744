//! Boulder-wall robustness protocol.
//!
//! A passive antenna on a fixed-angle base is dragged at constant speed past
//! a vertical line of small spherical boulders. Sliding friction against the
//! supporting surface acts on every link opposite to the drag direction.
//! Each trial draws an engagement depth, a mount-angle perturbation and
//! sensor noise from its seed. A trial fails by jam when the contact force
//! or a joint deflection stays beyond its limit for `jam_hold` seconds, and
//! by missed contact when the binary contact signal fails to register enough
//! of the geometric contact episodes, or when the antenna never touches a
//! wall that has boulders on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec2};
use crate::mechanics::{AntennaConfig, EquilibriumSolver, PointLoad, SolverOptions, StiffnessProfile};
use crate::sensing::{bend_level, contact_state, emulate_adc, AveragingWindow, Calibration, SensorModel};
use crate::world::build_boulder_wall;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoulderProtocol {
    /// Centre-to-centre boulder spacing (m).
    pub spacing: f64,
    pub boulder_count: usize,
    /// Base drag speed along the wall (m/s).
    pub drag_speed: f64,
    /// Mount angle of the undeflected antenna, measured from the wall
    /// normal toward the drag direction (deg).
    pub mount_angle_deg: f64,
    pub mount_jitter_deg: f64,
    /// Undeflected tip position past the boulder centre line (mm); each
    /// trial draws uniformly from this range.
    pub engagement_mm: [f64; 2],
    /// Sliding friction on each link from the supporting surface (N).
    pub surface_drag: f64,
    /// Contact force regarded as wedging (N).
    pub jam_force: f64,
    /// How long an over-force or over-deflection state must persist (s).
    pub jam_hold: f64,
    pub max_linear_deflection_deg: f64,
    /// Fraction of geometric contact episodes the sensor must register.
    pub min_detection_fraction: f64,
    /// Extra time after an episode ends during which a rising contact edge
    /// still counts, to cover averaging lag (s).
    pub detection_grace: f64,
}

impl Default for BoulderProtocol {
    fn default() -> Self {
        BoulderProtocol {
            spacing: 0.012,
            boulder_count: 10,
            drag_speed: 0.008,
            mount_angle_deg: 0.0,
            mount_jitter_deg: 2.0,
            engagement_mm: [-1.0, 8.0],
            surface_drag: 0.001,
            jam_force: 0.008,
            jam_hold: 0.5,
            max_linear_deflection_deg: 30.0,
            min_detection_fraction: 0.8,
            detection_grace: 0.1,
        }
    }
}

impl BoulderProtocol {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("spacing", self.spacing),
            ("drag_speed", self.drag_speed),
            ("jam_force", self.jam_force),
            ("jam_hold", self.jam_hold),
            ("max_linear_deflection_deg", self.max_linear_deflection_deg),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("boulder.{name} must be positive, got {v}")));
            }
        }
        if !(self.surface_drag >= 0.0) || !(self.mount_jitter_deg >= 0.0) || !(self.detection_grace >= 0.0) {
            return Err(Error::Config(
                "boulder.surface_drag, mount_jitter_deg and detection_grace must be >= 0".into(),
            ));
        }
        if !(self.engagement_mm[0] <= self.engagement_mm[1]) {
            return Err(Error::Config("boulder.engagement_mm must be [low, high]".into()));
        }
        if !(0.0..=1.0).contains(&self.min_detection_fraction) {
            return Err(Error::Config(
                "boulder.min_detection_fraction must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoulderOutcome {
    Success,
    Jam,
    MissedContact,
    SolverFailure,
}

impl BoulderOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            BoulderOutcome::Success => "success",
            BoulderOutcome::Jam => "jam",
            BoulderOutcome::MissedContact => "missed_contact",
            BoulderOutcome::SolverFailure => "solver_failure",
        }
    }
}

/// One sample of a boulder-wall trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoulderSample {
    pub t: f64,
    pub base_y: f64,
    pub total_bend: f64,
    pub max_force: f64,
    pub touching: bool,
    pub raw: u32,
    pub b: f64,
    pub contact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoulderTrial {
    pub seed: u64,
    pub outcome: BoulderOutcome,
    pub engagement_mm: f64,
    pub mount_angle_deg: f64,
    /// Geometric contact episodes and how many of them the sensor caught.
    pub episodes: usize,
    pub detected: usize,
    pub peak_force: f64,
    pub peak_deflection: f64,
    pub elapsed: f64,
    pub samples: Vec<BoulderSample>,
}

pub fn run_boulder_trial(
    profile: &StiffnessProfile,
    protocol: &BoulderProtocol,
    sensor: &SensorModel,
    calib: &Calibration,
    averaging_span: f64,
    solver: &SolverOptions,
    seed: u64,
) -> Result<BoulderTrial> {
    protocol.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [lo, hi] = protocol.engagement_mm;
    let engagement_mm = if hi > lo { rng.random_range(lo..hi) } else { lo };
    let jitter = if protocol.mount_jitter_deg > 0.0 {
        Normal::new(0.0, protocol.mount_jitter_deg)
            .map_err(|e| Error::Config(e.to_string()))?
            .sample(&mut rng)
    } else {
        0.0
    };
    let mount_deg = protocol.mount_angle_deg + jitter;

    // Wall along +y at x = 0, drag toward +y, antenna pointing at +x. The
    // mount angle tilts the antenna back toward -y.
    let mount = -mount_deg.to_radians();
    let mut config = AntennaConfig::with_profile(profile.clone()).mount_angle(mount);
    config.max_linear_deflection = protocol.max_linear_deflection_deg.to_radians();
    let length = config.total_length();
    let env = build_boulder_wall(protocol.spacing, protocol.boulder_count)?;
    let base_x = engagement_mm * 1e-3 - length * mount.cos();
    let y_start = -length * mount.sin().abs() - 0.02 - length * 0.5;
    let y_end = protocol.spacing * protocol.boulder_count.saturating_sub(1) as f64 + 0.02 + length * 0.5;
    let loads: Vec<PointLoad> = (0..config.joints())
        .map(|link| PointLoad {
            link,
            fraction: 0.5,
            force: Vec2::new(0.0, -protocol.surface_drag),
        })
        .collect();

    let solver = EquilibriumSolver::new(*solver);
    let mut window = AveragingWindow::new(averaging_span)?;
    let dt = sensor.sample_period();
    let steps = ((y_end - y_start) / protocol.drag_speed / dt).ceil() as usize;

    let mut warm: Vec<f64> = vec![0.0; config.joints()];
    let mut samples = Vec::with_capacity(steps + 1);
    let mut edges: Vec<f64> = Vec::new();
    let mut episodes: Vec<(f64, f64)> = Vec::new();
    let mut prev_contact = false;
    let mut prev_touching = false;
    let mut over_since: Option<f64> = None;
    let (mut peak_force, mut peak_deflection) = (0.0f64, 0.0f64);
    let mut outcome = None;
    let mut elapsed = 0.0;

    for i in 0..=steps {
        let t = i as f64 * dt;
        elapsed = t;
        let base_y = y_start + protocol.drag_speed * t;
        let base = Pose::new(base_x, base_y, 0.0);
        let state = match solver.solve_from(&config, &base, &env, &loads, Some(&warm)) {
            Ok(s) => s,
            Err(Error::SolverFailure { .. }) => {
                outcome = Some(BoulderOutcome::SolverFailure);
                break;
            }
            Err(e) => return Err(e),
        };
        warm.clone_from(&state.joint_deflections);

        let force = state.max_contact_force();
        peak_force = peak_force.max(force);
        peak_deflection = peak_deflection.max(state.max_deflection());

        let raw = emulate_adc(state.total_bend, sensor, calib, &mut rng);
        let averaged = window.push(f64::from(raw), t)?;
        let b = bend_level(averaged, calib, sensor);
        let contact = contact_state(b, calib);
        if contact && !prev_contact {
            edges.push(t);
        }
        prev_contact = contact;
        let touching = state.contacts.iter().any(|c| c.normal_force > 0.0);
        match (prev_touching, touching) {
            (false, true) => episodes.push((t, t)),
            (true, _) => {
                if let Some(ep) = episodes.last_mut() {
                    ep.1 = t;
                }
            }
            _ => {}
        }
        prev_touching = touching;
        samples.push(BoulderSample {
            t,
            base_y,
            total_bend: state.total_bend,
            max_force: force,
            touching,
            raw,
            b,
            contact,
        });

        if force > protocol.jam_force || state.beyond_linear_range {
            let since = *over_since.get_or_insert(t);
            if t - since >= protocol.jam_hold - 1e-9 {
                outcome = Some(BoulderOutcome::Jam);
                break;
            }
        } else {
            over_since = None;
        }
    }

    let detected = episodes
        .iter()
        .filter(|(start, end)| {
            edges
                .iter()
                .any(|e| *e >= *start && *e <= *end + protocol.detection_grace)
        })
        .count();
    let outcome = outcome.unwrap_or_else(|| {
        let enough = detected as f64 >= protocol.min_detection_fraction * episodes.len() as f64;
        let never_touched = episodes.is_empty() && !env.obstacles.is_empty();
        if never_touched || !enough {
            BoulderOutcome::MissedContact
        } else {
            BoulderOutcome::Success
        }
    });
    Ok(BoulderTrial {
        seed,
        outcome,
        engagement_mm,
        mount_angle_deg: mount_deg,
        episodes: episodes.len(),
        detected,
        peak_force,
        peak_deflection,
        elapsed,
        samples,
    })
}
