//! Kinematic model of the six-link robot with two antennae.
//!
//! The head follows velocity templates per maneuver. The body is pulled
//! behind the head link by link (follow-the-leader) and every link is pushed
//! out of obstacles; movable obstacles give way by their compliance, up to a
//! per-step cap. The serpenoid joint angles are carried as the commanded
//! gait but do not move the body geometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gait::{serpenoid_angles, GaitConfig, Maneuver};
use crate::geometry::{Pose, Vec2};
use crate::mechanics::{AntennaConfig, AntennaState, EquilibriumSolver, StiffnessProfile};

use super::env::{Environment, Shape};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobotConfig {
    pub links: usize,
    pub link_length: f64,
    pub body_width: f64,
    /// Head speed for FORWARD and turns (m/s).
    pub forward_speed: f64,
    pub reverse_speed: f64,
    /// Heading rate while turning (deg/s).
    pub turn_rate_deg: f64,
    /// Lateral distance of each antenna base from the head point (m).
    pub antenna_lateral: f64,
    /// Outward splay of each antenna from the heading (deg).
    pub antenna_mount_deg: f64,
    /// Body-obstacle contact stiffness used to turn penetration into push
    /// force (N/m).
    pub contact_stiffness: f64,
    /// Fastest a movable obstacle can be shoved (m/s).
    pub max_push_speed: f64,
    /// Head speed below which the stuck timer runs (m/s).
    pub stuck_speed: f64,
    /// Coulomb coefficient between body and obstacles; sliding along a
    /// contact loses up to this fraction of the penetration correction.
    pub body_friction: f64,
}

impl Default for RobotConfig {
    fn default() -> Self {
        RobotConfig {
            links: 6,
            link_length: 0.12,
            body_width: 0.20,
            forward_speed: 0.12,
            reverse_speed: 0.06,
            turn_rate_deg: 20.0,
            antenna_lateral: 0.06,
            antenna_mount_deg: 15.0,
            contact_stiffness: 500.0,
            max_push_speed: 0.06,
            stuck_speed: 0.01,
            body_friction: 0.3,
        }
    }
}

impl RobotConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("link_length", self.link_length),
            ("body_width", self.body_width),
            ("forward_speed", self.forward_speed),
            ("reverse_speed", self.reverse_speed),
            ("turn_rate_deg", self.turn_rate_deg),
            ("contact_stiffness", self.contact_stiffness),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("robot.{name} must be positive, got {v}")));
            }
        }
        if self.links == 0
            || !(self.max_push_speed >= 0.0)
            || !(self.stuck_speed >= 0.0)
            || !(self.body_friction >= 0.0 && self.body_friction.is_finite())
        {
            return Err(Error::InvalidInput(
                "robot needs links; push speed, stuck speed and friction must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Heading change per metre travelled while turning (rad/m).
    pub fn curvature(&self) -> f64 {
        self.turn_rate_deg.to_radians() / self.forward_speed
    }

    pub fn body_length(&self) -> f64 {
        self.link_length * self.links as f64
    }
}

/// Robot geometry plus the two antenna chains.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    pub config: RobotConfig,
    pub left: AntennaConfig,
    pub right: AntennaConfig,
}

impl RobotModel {
    pub fn new(config: RobotConfig, profile: StiffnessProfile) -> Result<Self> {
        config.validate()?;
        let mount = config.antenna_mount_deg.to_radians();
        let left = AntennaConfig::with_profile(profile.clone()).mount_angle(mount);
        let right = AntennaConfig::with_profile(profile).mount_angle(-mount);
        Ok(RobotModel { config, left, right })
    }

    pub fn antenna_bases(&self, head: &Pose) -> (Pose, Pose) {
        let lateral = head.direction().perp() * self.config.antenna_lateral;
        let p = head.position();
        (
            Pose::new(p.x + lateral.x, p.y + lateral.y, head.heading),
            Pose::new(p.x - lateral.x, p.y - lateral.y, head.heading),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub t: f64,
    pub head: Pose,
    /// Commanded serpenoid joint angles.
    pub joint_angles: Vec<f64>,
    /// Body centre line from head to tail, `links + 1` points.
    pub spine: Vec<Vec2>,
    pub link_length: f64,
    pub body_width: f64,
    pub left: AntennaState,
    pub right: AntennaState,
    pub stuck_timer: f64,
    pub path_length: f64,
    /// Antenna solves that failed and kept the previous shape.
    pub solver_failures: usize,
}

impl RobotState {
    /// Straight body trailing behind `head`, antennae at equilibrium.
    pub fn new(model: &RobotModel, head: Pose, env: &Environment, solver: &EquilibriumSolver) -> Result<Self> {
        let cfg = &model.config;
        let back = head.direction() * -cfg.link_length;
        let spine = (0..=cfg.links).map(|k| head.position() + back * k as f64).collect();
        let (lb, rb) = model.antenna_bases(&head);
        let left = solver.solve(&model.left, &lb, env)?;
        let right = solver.solve(&model.right, &rb, env)?;
        Ok(RobotState {
            t: 0.0,
            head,
            joint_angles: vec![0.0; cfg.links - 1],
            spine,
            link_length: cfg.link_length,
            body_width: cfg.body_width,
            left,
            right,
            stuck_timer: 0.0,
            path_length: 0.0,
            solver_failures: 0,
        })
    }

    /// Pose of each link: midpoint and orientation pointing toward the head.
    pub fn link_poses(&self) -> Vec<Pose> {
        self.spine
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) * 0.5;
                let d = w[0] - w[1];
                Pose::new(mid.x, mid.y, d.y.atan2(d.x))
            })
            .collect()
    }

    /// Deepest penetration of any body link into an immovable obstacle.
    pub fn max_fixed_penetration(&self, env: &Environment) -> f64 {
        let radius = 0.5 * self.body_width;
        let mut worst = 0.0f64;
        for w in self.spine.windows(2) {
            for o in env.obstacles.iter().filter(|o| !o.movable) {
                if let Some(hit) = o.segment_hit(w[0], w[1], radius) {
                    worst = worst.max(hit.penetration);
                }
            }
        }
        worst
    }
}

const PENETRATION_TOLERANCE: f64 = 1e-5;
const PROJECTION_PASSES: usize = 12;

/// Pull every spine point to one link length behind its predecessor.
fn follow(spine: &mut [Vec2], link_length: f64, fallback: Vec2) {
    for k in 1..spine.len() {
        let d = spine[k] - spine[k - 1];
        let dir = d.normalized().unwrap_or(fallback);
        spine[k] = spine[k - 1] + dir * link_length;
    }
}

/// Moves a circle out of every other obstacle; returns false if it could not
/// be freed.
fn settle_circle(env: &mut Environment, index: usize) -> bool {
    for _ in 0..4 {
        let Shape::Circle { center, radius } = env.obstacles[index].shape else {
            return true;
        };
        let mut clear = true;
        for j in 0..env.obstacles.len() {
            if j == index {
                continue;
            }
            if let Some(hit) = env.obstacles[j].segment_hit(center, center, radius) {
                if hit.penetration > PENETRATION_TOLERANCE {
                    env.obstacles[index].translate(hit.normal * hit.penetration);
                    clear = false;
                }
            }
        }
        if clear {
            return true;
        }
    }
    let Shape::Circle { center, radius } = env.obstacles[index].shape else {
        return true;
    };
    env.obstacles
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .all(|(_, o)| {
            o.segment_hit(center, center, radius)
                .is_none_or(|h| h.penetration <= 1e-4)
        })
}

/// Advances the robot by one step of `dt` seconds under maneuver `m`.
/// Movable obstacles in `env` may be displaced.
pub fn step_robot(
    state: &RobotState,
    m: Maneuver,
    gait: &GaitConfig,
    dt: f64,
    env: &mut Environment,
    model: &RobotModel,
    solver: &EquilibriumSolver,
) -> Result<RobotState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let cfg = &model.config;
    let t = state.t + dt;
    let turn = cfg.curvature() * cfg.forward_speed * dt;
    // Forward maneuvers lead with the head; REVERSE leads with the tail and
    // the head follows the body back along its own path.
    let reverse = m == Maneuver::Reverse;
    let heading = match m {
        Maneuver::TurnLeft => state.head.heading + turn,
        Maneuver::TurnRight => state.head.heading - turn,
        _ => state.head.heading,
    };
    let radius = 0.5 * cfg.body_width;

    let mut spine = state.spine.clone();
    if reverse {
        spine.reverse();
    }
    let start = spine.clone();
    let lead = if reverse {
        (spine[0] - spine[1]).normalized().unwrap_or(-Vec2::from_angle(heading))
    } else {
        Vec2::from_angle(heading)
    };
    let speed = if reverse { cfg.reverse_speed } else { cfg.forward_speed };
    spine[0] += lead * (speed * dt);
    let mut pushed = vec![0.0f64; env.obstacles.len()];
    let push_cap = cfg.max_push_speed * dt;

    for _ in 0..PROJECTION_PASSES {
        follow(&mut spine, cfg.link_length, -lead);
        let mut moved = false;
        for k in 0..cfg.links {
            for j in 0..env.obstacles.len() {
                let Some(mut hit) = env.obstacles[j].segment_hit(spine[k], spine[k + 1], radius) else {
                    continue;
                };
                if hit.penetration <= PENETRATION_TOLERANCE {
                    continue;
                }
                let obstacle = &env.obstacles[j];
                if obstacle.movable && pushed[j] < push_cap {
                    let want = obstacle.compliance * cfg.contact_stiffness * hit.penetration;
                    let shove = want.min(push_cap - pushed[j]).min(hit.penetration);
                    if shove > 0.0 {
                        let snapshot = env.obstacles[j].clone();
                        env.obstacles[j].translate(hit.normal * -shove);
                        if settle_circle(env, j) {
                            pushed[j] += shove;
                        } else {
                            env.obstacles[j] = snapshot;
                        }
                    }
                    match env.obstacles[j].segment_hit(spine[k], spine[k + 1], radius) {
                        Some(h) if h.penetration > PENETRATION_TOLERANCE => hit = h,
                        _ => continue,
                    }
                }
                let correction = hit.normal * hit.penetration;
                spine[k] += correction;
                spine[k + 1] += correction;
                if cfg.body_friction > 0.0 {
                    let budget = cfg.body_friction * hit.penetration;
                    for p in [k, k + 1] {
                        let d = spine[p] - start[p];
                        let slip = d - hit.normal * d.dot(hit.normal);
                        let n = slip.norm();
                        if n > 0.0 {
                            spine[p] = spine[p] - slip * (budget.min(n) / n);
                        }
                    }
                }
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    follow(&mut spine, cfg.link_length, -lead);
    if reverse {
        spine.reverse();
    }
    let heading = if reverse {
        let d = spine[0] - spine[1];
        let delta = d.y.atan2(d.x) - heading;
        heading + delta.sin().atan2(delta.cos())
    } else {
        heading
    };

    let head = Pose::new(spine[0].x, spine[0].y, heading);
    let step = spine[0].distance(state.spine[0]);
    let stuck_timer = if step < cfg.stuck_speed * dt {
        state.stuck_timer + dt
    } else {
        0.0
    };

    let (lb, rb) = model.antenna_bases(&head);
    let mut failures = state.solver_failures;
    let left = solve_antenna(solver, &model.left, &lb, env, &state.left, &mut failures)?;
    let right = solve_antenna(solver, &model.right, &rb, env, &state.right, &mut failures)?;

    Ok(RobotState {
        t,
        head,
        joint_angles: serpenoid_angles(t, &gait.template(m)),
        spine,
        link_length: cfg.link_length,
        body_width: cfg.body_width,
        left,
        right,
        stuck_timer,
        path_length: state.path_length + step,
        solver_failures: failures,
    })
}

fn solve_antenna(
    solver: &EquilibriumSolver,
    config: &AntennaConfig,
    base: &Pose,
    env: &Environment,
    previous: &AntennaState,
    failures: &mut usize,
) -> Result<AntennaState> {
    let attempt = solver
        .solve_from(config, base, env, &[], Some(&previous.joint_deflections))
        .or_else(|_| solver.solve_from(config, base, env, &[], None));
    match attempt {
        Ok(s) => Ok(s),
        Err(Error::SolverFailure { .. }) => {
            *failures += 1;
            let mut kept = previous.clone();
            kept.link_endpoints = config.chain_endpoints(base, &previous.joint_deflections);
            Ok(kept)
        }
        Err(e) => Err(e),
    }
}
