//! Planar environments, collision queries and the kinematic robot model.

pub mod contacts;
pub mod env;
pub mod robot;
pub mod scenarios;
pub mod trial;

pub use contacts::{antenna_contacts, chain_contacts, Contact};
pub use env::{Environment, Obstacle, SegmentHit, Shape};
pub use robot::{step_robot, RobotConfig, RobotModel, RobotState};
pub use scenarios::{build_boulder_wall, build_tunnel, Tunnel, TunnelLayout, BOULDER_RADIUS, MAX_TUNNEL_ATTEMPTS};
pub use trial::{TimelineRow, TrialOutcome, TrialRecord};
