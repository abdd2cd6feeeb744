//! Quasi-static equilibrium of a torsion-spring link chain under penalty
//! contact and applied point loads.
//!
//! Equilibrium is the stationary point of
//! `E = 1/2 sum k_j theta_j^2 + 1/2 k_pen sum pen_c^2 - sum F_l . q_l`,
//! whose gradient at joint `j` is exactly `k_j theta_j - M_j` with `M_j`
//! the moment of every contact and load force distal to the joint. The
//! minimiser is a damped Newton iteration: Gauss-Newton curvature for the
//! contacts, exact load curvature, Levenberg regularisation when the model
//! is indefinite, and backtracking on `E`. Gauss-Newton drops the curvature
//! of contacts that roll around a joint or an obstacle corner, so after a
//! few slow iterations the curvature is replaced by finite differences of
//! the exact gradient.
//!
//! Where two obstacles meet at a corner the contact energy has a kink and
//! the torque residual can stall at a genuine minimum. `stationary_energy`
//! opts into accepting such a point once the energy stops decreasing and
//! the residual is below `stationary_residual`.

use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec2};
use crate::world::contacts::antenna_contacts;
use crate::world::env::Environment;

use super::profile::StiffnessProfile;

pub const DEFAULT_TOTAL_LENGTH: f64 = 0.18;
pub const DEFAULT_PENALTY_STIFFNESS: f64 = 500.0;

const GAUSS_NEWTON_ITERATIONS: usize = 20;
const FD_STEP: f64 = 1e-7;
const STATIONARY_ITERATIONS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaConfig {
    pub link_lengths: Vec<f64>,
    pub profile: StiffnessProfile,
    /// Angle of the undeflected antenna relative to the base heading.
    pub base_mount_angle: f64,
    /// Largest joint deflection still considered linear-elastic.
    pub max_linear_deflection: f64,
}

impl AntennaConfig {
    pub fn new(
        link_lengths: Vec<f64>,
        profile: StiffnessProfile,
        base_mount_angle: f64,
        max_linear_deflection: f64,
    ) -> Result<Self> {
        if link_lengths.len() != profile.len() {
            return Err(Error::InvalidInput(format!(
                "{} links but {} joint stiffness values",
                link_lengths.len(),
                profile.len()
            )));
        }
        if link_lengths.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidInput("link lengths must be positive".into()));
        }
        if !base_mount_angle.is_finite() || !(max_linear_deflection > 0.0) {
            return Err(Error::InvalidInput(
                "mount angle must be finite and deflection limit positive".into(),
            ));
        }
        Ok(AntennaConfig {
            link_lengths,
            profile,
            base_mount_angle,
            max_linear_deflection,
        })
    }

    /// Equal links totalling 0.18 m, straight ahead, 30 degree linear limit.
    pub fn with_profile(profile: StiffnessProfile) -> Self {
        let n = profile.len();
        AntennaConfig {
            link_lengths: vec![DEFAULT_TOTAL_LENGTH / n as f64; n],
            profile,
            base_mount_angle: 0.0,
            max_linear_deflection: 30f64.to_radians(),
        }
    }

    pub fn mount_angle(mut self, angle: f64) -> Self {
        self.base_mount_angle = angle;
        self
    }

    pub fn joints(&self) -> usize {
        self.link_lengths.len()
    }

    pub fn total_length(&self) -> f64 {
        self.link_lengths.iter().sum()
    }

    /// Distance from each joint to the tip along the undeflected chain.
    pub fn lever_arms(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .link_lengths
            .iter()
            .rev()
            .map(|l| {
                acc += l;
                acc
            })
            .collect();
        out.reverse();
        out
    }

    /// Joint positions `p_0 .. p_n` (p_n is the tip) for given deflections.
    pub fn chain_endpoints(&self, base: &Pose, deflections: &[f64]) -> Vec<Vec2> {
        let mut angle = base.heading + self.base_mount_angle;
        let mut p = base.position();
        let mut out = Vec::with_capacity(self.joints() + 1);
        out.push(p);
        for (len, theta) in self.link_lengths.iter().zip(deflections) {
            angle += theta;
            p += Vec2::from_angle(angle) * *len;
            out.push(p);
        }
        out
    }
}

/// A dead load applied at a fixed fraction along a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLoad {
    pub link: usize,
    /// Position along the link in [0, 1].
    pub fraction: f64,
    pub force: Vec2,
}

impl PointLoad {
    pub fn at_tip(config: &AntennaConfig, force: Vec2) -> Self {
        PointLoad {
            link: config.joints() - 1,
            fraction: 1.0,
            force,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Contact penalty stiffness (N/m).
    pub penalty_stiffness: f64,
    /// Largest admissible joint torque residual (N*m).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Accept a point once the relative energy decrease per iteration stays
    /// below this value for several iterations, provided the residual is
    /// under `stationary_residual`. Contacts at wall corners make the energy
    /// non-smooth, so the residual can stall above `tolerance` at a genuine
    /// minimum.
    pub stationary_energy: Option<f64>,
    /// Largest residual accepted at a stationary point (N*m).
    pub stationary_residual: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            penalty_stiffness: DEFAULT_PENALTY_STIFFNESS,
            tolerance: 1e-6,
            max_iterations: 2000,
            stationary_energy: None,
            stationary_residual: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaContact {
    pub link: usize,
    pub obstacle: usize,
    pub point: Vec2,
    /// Unit normal from the obstacle toward the antenna.
    pub normal: Vec2,
    pub penetration: f64,
    pub normal_force: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaState {
    pub joint_deflections: Vec<f64>,
    pub link_endpoints: Vec<Vec2>,
    pub contacts: Vec<AntennaContact>,
    /// Sum of absolute joint deflections.
    pub total_bend: f64,
    /// Set when any joint exceeds the configured linear deflection limit.
    pub beyond_linear_range: bool,
    pub residual: f64,
    pub iterations: usize,
}

impl AntennaState {
    pub fn tip(&self) -> Vec2 {
        *self.link_endpoints.last().expect("chain has at least one point")
    }

    pub fn max_contact_force(&self) -> f64 {
        self.contacts.iter().map(|c| c.normal_force).fold(0.0, f64::max)
    }

    pub fn max_deflection(&self) -> f64 {
        self.joint_deflections.iter().map(|t| t.abs()).fold(0.0, f64::max)
    }

    /// Normal force on the most distal contacting link, or zero.
    pub fn tip_contact_force(&self) -> f64 {
        let Some(link) = self
            .contacts
            .iter()
            .filter(|c| c.normal_force > 0.0)
            .map(|c| c.link)
            .max()
        else {
            return 0.0;
        };
        self.contacts
            .iter()
            .filter(|c| c.link == link)
            .map(|c| c.normal_force)
            .sum()
    }
}

/// Force acting on a material point of a given link.
struct AppliedForce {
    link: usize,
    point: Vec2,
    force: Vec2,
}

struct Evaluation {
    energy: f64,
    gradient: Vec<f64>,
    hessian: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EquilibriumSolver {
    pub options: SolverOptions,
}

impl EquilibriumSolver {
    pub fn new(options: SolverOptions) -> Self {
        EquilibriumSolver { options }
    }

    /// Solves from the undeflected configuration with no applied loads.
    pub fn solve(&self, config: &AntennaConfig, base: &Pose, env: &Environment) -> Result<AntennaState> {
        self.solve_from(config, base, env, &[], None)
    }

    /// Full solve with optional point loads and a warm start.
    pub fn solve_from(
        &self,
        config: &AntennaConfig,
        base: &Pose,
        env: &Environment,
        loads: &[PointLoad],
        warm_start: Option<&[f64]>,
    ) -> Result<AntennaState> {
        if !base.is_finite() {
            return Err(Error::InvalidInput("base pose must be finite".into()));
        }
        let n = config.joints();
        if loads.iter().any(|l| l.link >= n || !l.force.is_finite()) {
            return Err(Error::InvalidInput("point load on a non-existent link".into()));
        }
        let mut theta = match warm_start {
            Some(w) if w.len() == n && w.iter().all(|t| t.is_finite()) => w.to_vec(),
            Some(_) => return Err(Error::InvalidInput("warm start has the wrong length".into())),
            None => vec![0.0; n],
        };
        let k = config.profile.joint_stiffness();
        let tol = self.options.tolerance;

        let mut eval = self.evaluate(config, base, env, loads, &theta);
        let mut iterations = 0;
        let mut lambda = 0.0;
        let mut still = 0;
        while max_abs(&eval.gradient) >= tol {
            if iterations >= self.options.max_iterations {
                return Err(Error::SolverFailure {
                    iterations,
                    residual: max_abs(&eval.gradient),
                });
            }
            iterations += 1;

            if iterations > GAUSS_NEWTON_ITERATIONS {
                eval.hessian = self.finite_difference_hessian(config, base, env, loads, &theta, &eval.gradient);
            }
            let step = newton_step(&eval, k, &mut lambda);
            let slope: f64 = step.iter().zip(&eval.gradient).map(|(s, g)| s * g).sum();
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t + alpha * s).collect();
                let e = self.evaluate(config, base, env, loads, &trial);
                if e.energy <= eval.energy + 1e-4 * alpha * slope {
                    accepted = Some((trial, e));
                    break;
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((t, e)) => {
                    if let Some(limit) = self.options.stationary_energy {
                        let drop = eval.energy - e.energy;
                        still = if drop <= limit * eval.energy.abs().max(f64::MIN_POSITIVE) {
                            still + 1
                        } else {
                            0
                        };
                    }
                    theta = t;
                    eval = e;
                    lambda = if alpha == 1.0 { lambda * 0.1 } else { lambda };
                    if self.settled(still, &eval) {
                        break;
                    }
                }
                None => {
                    if self.options.stationary_energy.is_some() {
                        still += 1;
                        if self.settled(still, &eval) {
                            break;
                        }
                    }
                    // Energy is flat to rounding along the step: stiffen the model.
                    lambda = if lambda == 0.0 { 1e-3 } else { lambda * 10.0 };
                    if lambda > 1e12 {
                        return Err(Error::SolverFailure {
                            iterations,
                            residual: max_abs(&eval.gradient),
                        });
                    }
                }
            }
        }

        Ok(self.state(config, base, env, theta, max_abs(&eval.gradient), iterations))
    }

    fn settled(&self, still: usize, eval: &Evaluation) -> bool {
        still >= STATIONARY_ITERATIONS && max_abs(&eval.gradient) <= self.options.stationary_residual
    }

    fn forces(
        &self,
        config: &AntennaConfig,
        points: &[Vec2],
        env: &Environment,
        loads: &[PointLoad],
    ) -> (Vec<AntennaContact>, Vec<AppliedForce>) {
        let contacts: Vec<AntennaContact> = antenna_contacts(points, env)
            .into_iter()
            .map(|c| AntennaContact {
                link: c.link,
                obstacle: c.obstacle,
                point: c.point,
                normal: c.normal,
                penetration: c.penetration,
                normal_force: self.options.penalty_stiffness * c.penetration,
            })
            .collect();
        let mut applied: Vec<AppliedForce> = contacts
            .iter()
            .map(|c| AppliedForce {
                link: c.link,
                point: c.point,
                force: c.normal * c.normal_force,
            })
            .collect();
        applied.extend(loads.iter().map(|l| {
            let (a, b) = (points[l.link], points[l.link + 1]);
            AppliedForce {
                link: l.link,
                point: a + (b - a) * l.fraction,
                force: l.force,
            }
        }));
        debug_assert!(points.len() == config.joints() + 1);
        (contacts, applied)
    }

    fn evaluate(
        &self,
        config: &AntennaConfig,
        base: &Pose,
        env: &Environment,
        loads: &[PointLoad],
        theta: &[f64],
    ) -> Evaluation {
        let n = theta.len();
        let k = config.profile.joint_stiffness();
        let kp = self.options.penalty_stiffness;
        let points = config.chain_endpoints(base, theta);
        let (contacts, applied) = self.forces(config, &points, env, loads);

        let mut energy: f64 = 0.5 * k.iter().zip(theta).map(|(k, t)| k * t * t).sum::<f64>();
        energy += 0.5 * kp * contacts.iter().map(|c| c.penetration * c.penetration).sum::<f64>();
        for l in loads {
            let (a, b) = (points[l.link], points[l.link + 1]);
            energy -= l.force.dot(a + (b - a) * l.fraction);
        }

        let moments = joint_moments(&points, &applied, n);
        let gradient: Vec<f64> = (0..n).map(|j| k[j] * theta[j] - moments[j]).collect();

        let mut hessian = vec![vec![0.0; n]; n];
        for (j, row) in hessian.iter_mut().enumerate() {
            row[j] = k[j];
        }
        for c in &contacts {
            let jac: Vec<f64> = (0..=c.link).map(|j| (c.point - points[j]).cross(c.normal)).collect();
            for a in 0..=c.link {
                for b in 0..=c.link {
                    hessian[a][b] += kp * jac[a] * jac[b];
                }
            }
        }
        for l in loads {
            let (a, b) = (points[l.link], points[l.link + 1]);
            let q = a + (b - a) * l.fraction;
            for i in 0..=l.link {
                for j in 0..=l.link {
                    hessian[i][j] += (q - points[i.max(j)]).dot(l.force);
                }
            }
        }

        Evaluation {
            energy,
            gradient,
            hessian,
        }
    }

    fn finite_difference_hessian(
        &self,
        config: &AntennaConfig,
        base: &Pose,
        env: &Environment,
        loads: &[PointLoad],
        theta: &[f64],
        gradient: &[f64],
    ) -> Vec<Vec<f64>> {
        let n = theta.len();
        let mut h = vec![vec![0.0; n]; n];
        let mut probe = theta.to_vec();
        for j in 0..n {
            probe[j] = theta[j] + FD_STEP;
            let g = self.evaluate(config, base, env, loads, &probe).gradient;
            probe[j] = theta[j];
            for i in 0..n {
                h[i][j] = (g[i] - gradient[i]) / FD_STEP;
            }
        }
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (h[i][j] + h[j][i]);
                h[i][j] = m;
                h[j][i] = m;
            }
        }
        h
    }

    fn state(
        &self,
        config: &AntennaConfig,
        base: &Pose,
        env: &Environment,
        theta: Vec<f64>,
        residual: f64,
        iterations: usize,
    ) -> AntennaState {
        let points = config.chain_endpoints(base, &theta);
        let (contacts, _) = self.forces(config, &points, env, &[]);
        let total_bend = theta.iter().map(|t| t.abs()).sum();
        let beyond_linear_range = theta.iter().any(|t| t.abs() > config.max_linear_deflection);
        AntennaState {
            joint_deflections: theta,
            link_endpoints: points,
            contacts,
            total_bend,
            beyond_linear_range,
            residual,
            iterations,
        }
    }
}

/// Moment about each joint of all forces acting on that joint's link or
/// any more distal link.
fn joint_moments(points: &[Vec2], forces: &[AppliedForce], joints: usize) -> Vec<f64> {
    let mut m = vec![0.0; joints];
    for f in forces {
        for (j, mj) in m.iter_mut().enumerate().take(f.link + 1) {
            *mj += (f.point - points[j]).cross(f.force);
        }
    }
    m
}

/// Recomputes the contact and load moment about every joint for a given
/// deflection state. Used to audit equilibrium residuals independently of
/// the solver's own bookkeeping.
pub fn contact_moments(
    config: &AntennaConfig,
    base: &Pose,
    env: &Environment,
    loads: &[PointLoad],
    deflections: &[f64],
    penalty_stiffness: f64,
) -> Vec<f64> {
    let points = config.chain_endpoints(base, deflections);
    let mut forces: Vec<AppliedForce> = antenna_contacts(&points, env)
        .into_iter()
        .map(|c| AppliedForce {
            link: c.link,
            point: c.point,
            force: c.normal * (penalty_stiffness * c.penetration),
        })
        .collect();
    forces.extend(loads.iter().map(|l| {
        let (a, b) = (points[l.link], points[l.link + 1]);
        AppliedForce {
            link: l.link,
            point: a + (b - a) * l.fraction,
            force: l.force,
        }
    }));
    joint_moments(&points, &forces, config.joints())
}

/// Solves with default options from the undeflected configuration.
pub fn solve_equilibrium(config: &AntennaConfig, base: &Pose, env: &Environment) -> Result<AntennaState> {
    EquilibriumSolver::default().solve(config, base, env)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Levenberg-regularised Newton direction; `lambda` grows until the
/// regularised matrix factors.
fn newton_step(eval: &Evaluation, k: &[f64], lambda: &mut f64) -> Vec<f64> {
    let n = k.len();
    loop {
        let mut h = eval.hessian.clone();
        for (j, row) in h.iter_mut().enumerate() {
            row[j] += *lambda * k[j];
        }
        let rhs: Vec<f64> = eval.gradient.iter().map(|g| -g).collect();
        if let Some(step) = cholesky_solve(h, rhs) {
            return step;
        }
        *lambda = if *lambda == 0.0 { 1e-3 } else { *lambda * 10.0 };
        if *lambda > 1e12 {
            return (0..n).map(|j| -eval.gradient[j] / k[j]).collect();
        }
    }
}

/// Solves `a x = b` for symmetric positive-definite `a`; `None` if `a` is
/// not positive definite.
fn cholesky_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for j in 0..n {
        let mut d = a[j][j];
        for p in 0..j {
            d -= a[j][p] * a[j][p];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        a[j][j] = d;
        for i in j + 1..n {
            let mut s = a[i][j];
            for p in 0..j {
                s -= a[i][p] * a[j][p];
            }
            a[i][j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for p in 0..i {
            s -= a[i][p] * b[p];
        }
        b[i] = s / a[i][i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for p in i + 1..n {
            s -= a[p][i] * b[p];
        }
        b[i] = s / a[i][i];
    }
    Some(b)
}
