use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{closest_point_on_segment, closest_points_segments, Rect, Vec2};

/// Default half-thickness given to walls that do not specify one.
pub const DEFAULT_WALL_HALF_THICKNESS: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Circle {
        center: Vec2,
        radius: f64,
    },
    Wall {
        a: Vec2,
        b: Vec2,
        #[serde(default = "default_half_thickness")]
        half_thickness: f64,
    },
}

fn default_half_thickness() -> f64 {
    DEFAULT_WALL_HALF_THICKNESS
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default)]
    pub movable: bool,
    /// Displacement per unit applied force (m/N); only used when movable.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub compliance: f64,
}

/// A proximity hit between a query segment (swept by a radius) and an obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentHit {
    /// Point on the query segment's centre line.
    pub point: Vec2,
    /// Parameter of `point` along the query segment in [0, 1].
    pub param: f64,
    /// Unit normal pointing from the obstacle toward the query segment.
    pub normal: Vec2,
    pub penetration: f64,
}

impl Obstacle {
    pub fn circle(center: Vec2, radius: f64) -> Self {
        Obstacle {
            shape: Shape::Circle { center, radius },
            movable: false,
            compliance: 0.0,
        }
    }

    pub fn wall(a: Vec2, b: Vec2) -> Self {
        Obstacle {
            shape: Shape::Wall {
                a,
                b,
                half_thickness: DEFAULT_WALL_HALF_THICKNESS,
            },
            movable: false,
            compliance: 0.0,
        }
    }

    pub fn movable(mut self, compliance: f64) -> Self {
        self.movable = true;
        self.compliance = compliance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.shape {
            Shape::Circle { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                    return Err(Error::InvalidInput(format!("circle radius must be > 0, got {radius}")));
                }
            }
            Shape::Wall { a, b, half_thickness } => {
                if !a.is_finite() || !b.is_finite() || !(half_thickness >= 0.0) {
                    return Err(Error::InvalidInput("wall endpoints must be finite".into()));
                }
            }
        }
        if self.movable && !(self.compliance >= 0.0 && self.compliance.is_finite()) {
            return Err(Error::InvalidInput("movable compliance must be >= 0".into()));
        }
        Ok(())
    }

    pub fn translate(&mut self, delta: Vec2) {
        match &mut self.shape {
            Shape::Circle { center, .. } => *center += delta,
            Shape::Wall { a, b, .. } => {
                *a += delta;
                *b += delta;
            }
        }
    }

    pub fn mirrored(&self) -> Obstacle {
        let shape = match self.shape {
            Shape::Circle { center, radius } => Shape::Circle {
                center: center.mirrored(),
                radius,
            },
            Shape::Wall { a, b, half_thickness } => Shape::Wall {
                a: a.mirrored(),
                b: b.mirrored(),
                half_thickness,
            },
        };
        Obstacle { shape, ..*self }
    }

    /// Signed clearance from a point to the obstacle surface (negative inside).
    pub fn clearance(&self, p: Vec2) -> f64 {
        match self.shape {
            Shape::Circle { center, radius } => p.distance(center) - radius,
            Shape::Wall { a, b, half_thickness } => closest_point_on_segment(a, b, p).0.distance(p) - half_thickness,
        }
    }

    /// Tests the segment `a..b` inflated by `radius` against this obstacle.
    /// Touching counts as a hit with zero penetration.
    pub fn segment_hit(&self, a: Vec2, b: Vec2, radius: f64) -> Option<SegmentHit> {
        let fallback_normal = || (b - a).perp().normalized().unwrap_or(Vec2::new(0.0, 1.0));
        match self.shape {
            Shape::Circle { center, radius: r } => {
                let (q, param) = closest_point_on_segment(a, b, center);
                let d = q.distance(center);
                let reach = r + radius;
                if d > reach {
                    return None;
                }
                let normal = (q - center).normalized().unwrap_or_else(fallback_normal);
                Some(SegmentHit {
                    point: q,
                    param,
                    normal,
                    penetration: reach - d,
                })
            }
            Shape::Wall {
                a: wa,
                b: wb,
                half_thickness,
            } => {
                let reach = half_thickness + radius;
                let (param, _, c1, c2) = closest_points_segments(a, b, wa, wb);
                let d = c1.distance(c2);
                if d > reach {
                    return None;
                }
                if d > 0.0 {
                    return Some(SegmentHit {
                        point: c1,
                        param,
                        normal: (c1 - c2) * (1.0 / d),
                        penetration: reach - d,
                    });
                }
                // Centre line crosses the wall: push back toward the side of `a`.
                let wall_normal = (wb - wa).perp().normalized().unwrap_or_else(fallback_normal);
                let side = if (a - wa).dot(wall_normal) >= 0.0 { 1.0 } else { -1.0 };
                let normal = wall_normal * side;
                let depth = -(b - wa).dot(normal);
                Some(SegmentHit {
                    point: b,
                    param: 1.0,
                    normal,
                    penetration: reach + depth.max(0.0),
                })
            }
        }
    }
}

/// Planar world: obstacles, a goal region and outer bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub bounds: Rect,
    pub goal: Rect,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
}

impl Environment {
    pub fn new(bounds: Rect, goal: Rect) -> Self {
        Environment {
            bounds,
            goal,
            obstacles: Vec::new(),
        }
    }

    /// An obstacle-free world with very large bounds.
    pub fn empty() -> Self {
        let big = Rect::new(Vec2::new(-1e3, -1e3), Vec2::new(1e3, 1e3));
        Environment::new(big, big)
    }

    pub fn with_obstacle(mut self, obstacle: Obstacle) -> Self {
        self.obstacles.push(obstacle);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.bounds.is_valid() || !self.goal.is_valid() {
            return Err(Error::InvalidInput("bounds and goal must be valid rectangles".into()));
        }
        if !self.bounds.contains_rect(&self.goal) {
            return Err(Error::InvalidInput("goal region must lie inside bounds".into()));
        }
        self.obstacles.iter().try_for_each(Obstacle::validate)
    }

    pub fn mirrored(&self) -> Environment {
        Environment {
            bounds: self.bounds.mirrored(),
            goal: self.goal.mirrored(),
            obstacles: self.obstacles.iter().map(Obstacle::mirrored).collect(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let env: Environment = toml::from_str(text)?;
        env.validate()?;
        Ok(env)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let env = Environment::new(
            Rect::new(Vec2::new(0.0, -1.0), Vec2::new(3.0, 1.0)),
            Rect::new(Vec2::new(2.5, -0.5), Vec2::new(3.0, 0.5)),
        )
        .with_obstacle(Obstacle::circle(Vec2::new(1.0, 0.2), 0.07).movable(0.02))
        .with_obstacle(Obstacle::wall(Vec2::new(0.0, 0.2), Vec2::new(3.0, 0.2)));
        let text = env.to_toml().unwrap();
        assert!(text.contains("type = \"circle\""));
        assert_eq!(Environment::from_toml(&text).unwrap(), env);
    }

    #[test]
    fn rejects_goal_outside_bounds() {
        let env = Environment::new(
            Rect::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)),
            Rect::new(Vec2::new(0.5, 0.5), Vec2::new(2.0, 2.0)),
        );
        assert!(env.validate().is_err());
    }

    #[test]
    fn rejects_non_positive_radius() {
        assert!(Obstacle::circle(Vec2::ZERO, 0.0).validate().is_err());
    }

    #[test]
    fn crossing_wall_pushes_back_toward_start() {
        let wall = Obstacle::wall(Vec2::new(0.0, -1.0), Vec2::new(0.0, 1.0));
        let hit = wall
            .segment_hit(Vec2::new(-0.1, 0.0), Vec2::new(0.02, 0.0), 0.0)
            .unwrap();
        assert!(hit.normal.x < 0.0);
        assert!((hit.penetration - 0.025).abs() < 1e-12);
    }
}
