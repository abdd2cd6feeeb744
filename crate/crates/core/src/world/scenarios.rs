use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Pose, Rect, Vec2};

use super::env::{Environment, Obstacle};

/// Boulder diameter of the wall test: 6.35 mm spheres.
pub const BOULDER_RADIUS: f64 = 0.00635 / 2.0;

/// A straight line of boulders along +y starting at the origin.
pub fn build_boulder_wall(spacing: f64, count: usize) -> Result<Environment> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "boulder spacing must be > 0, got {spacing}"
        )));
    }
    let span = spacing * count.saturating_sub(1) as f64;
    let bounds = Rect::new(Vec2::new(-0.5, -0.5), Vec2::new(0.5, span + 0.5));
    let mut env = Environment::new(bounds, bounds);
    env.obstacles = (0..count)
        .map(|i| Obstacle::circle(Vec2::new(0.0, i as f64 * spacing), BOULDER_RADIUS))
        .collect();
    Ok(env)
}

/// Geometry of the cluttered tunnel: a straight entry leg, one bend and an
/// exit leg, with movable cylinders scattered along the way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TunnelLayout {
    pub width: f64,
    pub entry_length: f64,
    pub exit_length: f64,
    /// Bend magnitude (deg); the direction is drawn from the seed.
    pub turn_deg: f64,
    pub cylinder_count: usize,
    pub cylinder_radius: f64,
    /// Cylinder displacement per unit push force (m/N).
    pub cylinder_compliance: f64,
    /// Width the free channel must keep at every cross-section.
    pub robot_width: f64,
    /// Largest inset of a cylinder from the wall it is placed against (m).
    pub max_inset: f64,
    /// Cylinders are placed no closer than this to the start wall (m).
    pub clear_start: f64,
    /// Head position along the entry leg and its lateral offset toward the
    /// inside of the bend (m).
    pub start_depth: f64,
    pub start_offset: f64,
    /// Goal region begins this far along the exit leg (m).
    pub goal_depth: f64,
}

impl Default for TunnelLayout {
    fn default() -> Self {
        TunnelLayout {
            width: 0.40,
            entry_length: 1.6,
            exit_length: 1.0,
            turn_deg: 10.0,
            cylinder_count: 6,
            cylinder_radius: 0.07,
            cylinder_compliance: 0.02,
            robot_width: 0.20,
            max_inset: 0.06,
            clear_start: 0.95,
            start_depth: 0.77,
            start_offset: 0.05,
            goal_depth: 0.6,
        }
    }
}

/// A generated tunnel plus the robot's starting head pose.
#[derive(Debug, Clone, PartialEq)]
pub struct Tunnel {
    pub env: Environment,
    pub start: Pose,
    /// +1 for a left bend, -1 for a right bend.
    pub turn_sign: f64,
    pub attempts: u32,
}

pub const MAX_TUNNEL_ATTEMPTS: u32 = 100;

impl TunnelLayout {
    pub fn validate(&self) -> Result<()> {
        if !(self.width >= self.robot_width && self.robot_width > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tunnel width {} must be at least the robot width {}",
                self.width, self.robot_width
            )));
        }
        let positive = [
            self.entry_length,
            self.exit_length,
            self.cylinder_radius,
            self.goal_depth,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidInput(
                "tunnel lengths and cylinder radius must be positive".into(),
            ));
        }
        if !(self.turn_deg.abs() < 90.0) || !(self.cylinder_compliance >= 0.0) || !(self.max_inset >= 0.0) {
            return Err(Error::InvalidInput(
                "turn must be below 90 deg; compliance and inset >= 0".into(),
            ));
        }
        if self.goal_depth >= self.exit_length || self.start_depth >= self.entry_length {
            return Err(Error::InvalidInput("start and goal must lie inside their legs".into()));
        }
        Ok(())
    }

    fn centerline(&self, turn_sign: f64) -> Centerline {
        let beta = turn_sign * self.turn_deg.to_radians();
        Centerline {
            corner: Vec2::new(self.entry_length, 0.0),
            exit_dir: Vec2::from_angle(beta),
            entry_length: self.entry_length,
        }
    }

    pub fn build(&self, seed: u64) -> Result<Tunnel> {
        self.validate()?;
        for attempt in 0..MAX_TUNNEL_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(u64::from(attempt)));
            let turn_sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let line = self.centerline(turn_sign);
            let cylinders = self.place_cylinders(&line, &mut rng);
            if let Some(cylinders) = cylinders {
                if self.channel_is_free(&line, &cylinders) {
                    let env = self.assemble(&line, cylinders)?;
                    let start = Pose::new(self.start_depth, turn_sign * self.start_offset, 0.0);
                    return Ok(Tunnel {
                        env,
                        start,
                        turn_sign,
                        attempts: attempt + 1,
                    });
                }
            }
        }
        Err(Error::Infeasible {
            attempts: MAX_TUNNEL_ATTEMPTS,
        })
    }

    fn place_cylinders<R: Rng>(&self, line: &Centerline, rng: &mut R) -> Option<Vec<Vec2>> {
        let r = self.cylinder_radius;
        let total = self.entry_length + self.exit_length;
        let (s_lo, s_hi) = (self.clear_start + r, total - r);
        if self.cylinder_count > 0 && s_lo >= s_hi {
            return None;
        }
        let mut centers: Vec<Vec2> = Vec::with_capacity(self.cylinder_count);
        let mut tries = 0;
        while centers.len() < self.cylinder_count {
            tries += 1;
            if tries > 50 * (self.cylinder_count + 1) {
                return None;
            }
            let s = rng.random_range(s_lo..s_hi);
            let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let inset = if self.max_inset > 0.0 {
                rng.random_range(0.0..self.max_inset)
            } else {
                0.0
            };
            let lateral = side * (0.5 * self.width - r - inset);
            let c = line.point(s, lateral);
            if centers.iter().all(|o| o.distance(c) >= 2.0 * r + 0.01) {
                centers.push(c);
            }
        }
        Some(centers)
    }

    /// Every cross-section of the corridor keeps a gap of at least the robot
    /// width between walls and cylinders.
    fn channel_is_free(&self, line: &Centerline, cylinders: &[Vec2]) -> bool {
        let half = 0.5 * self.width;
        let total = self.entry_length + self.exit_length;
        let steps = (total / 0.01).ceil() as usize;
        for i in 0..=steps {
            let s = total * i as f64 / steps as f64;
            let (origin, normal) = line.section(s);
            let mut blocked: Vec<(f64, f64)> = cylinders
                .iter()
                .filter_map(|c| {
                    let rel = *c - origin;
                    let across = rel.dot(normal);
                    let dist_line = (rel - normal * across).norm();
                    if dist_line >= self.cylinder_radius {
                        return None;
                    }
                    let half_chord = (self.cylinder_radius.powi(2) - dist_line.powi(2)).sqrt();
                    Some((across - half_chord, across + half_chord))
                })
                .collect();
            blocked.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cursor = -half;
            let mut best = 0.0f64;
            for (lo, hi) in blocked {
                best = best.max(lo - cursor);
                cursor = cursor.max(hi);
            }
            best = best.max(half - cursor);
            if best < self.robot_width {
                return false;
            }
        }
        true
    }

    fn assemble(&self, line: &Centerline, cylinders: Vec<Vec2>) -> Result<Environment> {
        let half = 0.5 * self.width;
        let total = self.entry_length + self.exit_length;
        let exit_normal = line.exit_dir.perp();
        let entry_normal = Vec2::new(0.0, 1.0);
        // Mitred corner: the two offset lines of each side meet on the bisector.
        let mut walls = Vec::new();
        for side in [1.0, -1.0] {
            let start = Vec2::new(0.0, side * half);
            let end = line.point(total, side * half);
            let corner = mitre(line.corner, entry_normal * side, exit_normal * side, half);
            walls.push(Obstacle::wall(start, corner));
            walls.push(Obstacle::wall(corner, end));
        }
        walls.push(Obstacle::wall(Vec2::new(0.0, -half), Vec2::new(0.0, half)));

        let goal_a = line.point(self.entry_length + self.goal_depth, 0.0);
        let goal_b = line.point(total, 0.0);
        let goal = Rect::new(
            Vec2::new(goal_a.x.min(goal_b.x) - half, goal_a.y.min(goal_b.y) - half),
            Vec2::new(goal_a.x.max(goal_b.x) + half, goal_a.y.max(goal_b.y) + half),
        );
        let bounds = Rect::new(Vec2::new(-1.0, -total - 1.0), Vec2::new(total + 1.0, total + 1.0));
        let mut env = Environment::new(bounds, goal);
        env.obstacles = walls;
        env.obstacles.extend(
            cylinders
                .into_iter()
                .map(|c| Obstacle::circle(c, self.cylinder_radius).movable(self.cylinder_compliance)),
        );
        env.validate()?;
        Ok(env)
    }
}

fn mitre(corner: Vec2, n1: Vec2, n2: Vec2, offset: f64) -> Vec2 {
    let bisector = (n1 + n2).normalized().unwrap_or(n1);
    corner + bisector * (offset / bisector.dot(n1))
}

struct Centerline {
    corner: Vec2,
    exit_dir: Vec2,
    entry_length: f64,
}

impl Centerline {
    fn point(&self, s: f64, lateral: f64) -> Vec2 {
        let (origin, normal) = self.section(s);
        origin + normal * lateral
    }

    /// Centre point at arc length `s` and the left-pointing unit normal.
    fn section(&self, s: f64) -> (Vec2, Vec2) {
        if s <= self.entry_length {
            (Vec2::new(s, 0.0), Vec2::new(0.0, 1.0))
        } else {
            (
                self.corner + self.exit_dir * (s - self.entry_length),
                self.exit_dir.perp(),
            )
        }
    }
}

/// Seeded tunnel of the given width and cylinder count with the remaining
/// layout at its defaults.
pub fn build_tunnel(seed: u64, width: f64, cylinder_count: usize) -> Result<Environment> {
    let layout = TunnelLayout {
        width,
        cylinder_count,
        ..TunnelLayout::default()
    };
    Ok(layout.build(seed)?.env)
}
