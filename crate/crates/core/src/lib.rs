//! Simulation and control toolkit for compliant tactile antennae on
//! elongate multi-legged robots.
//!
//! * [`mechanics`]: torsion-spring antenna chains and their quasi-static
//!   equilibrium under contact.
//! * [`sensing`]: flex-sensor emulation, windowed averaging, sigmoid
//!   calibration and binary contact detection.
//! * [`gait`]: serpenoid body waves and maneuver templates.
//! * [`controller`]: the bilateral contact controller with maneuver hold.
//! * [`world`]: obstacles, contact queries and kinematic locomotion.
//! * [`harness`]: seeded experiments producing CSV summaries.

// Validation uses `!(x > 0.0)` so that NaN is rejected too, and the small
// dense solves read better with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod controller;
pub mod error;
pub mod gait;
pub mod geometry;
pub mod harness;
pub mod mechanics;
pub mod sensing;
pub mod world;

pub use error::{Error, Result};
pub use geometry::{Pose, Rect, Vec2};
