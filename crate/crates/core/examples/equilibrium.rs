// Quasi-static bending of three antennae pressed against the same post.

use tactile_antenna::geometry::{Pose, Vec2};
use tactile_antenna::mechanics::{paper_descending_profile, AntennaConfig, EquilibriumSolver, StiffnessProfile};
use tactile_antenna::world::{Environment, Obstacle};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let profiles = [
        ("descending", paper_descending_profile()),
        ("uniform_stiff", StiffnessProfile::uniform_stiff(6)),
        ("uniform_compliant", StiffnessProfile::uniform_compliant(6)),
    ];
    // A 6 mm post 13.5 cm along the antenna whose lower edge sits 5 mm
    // below the undeflected axis.
    let (r, depth) = (0.006, 0.005);
    let env = Environment::empty().with_obstacle(Obstacle::circle(Vec2::new(0.135, r - depth), r));
    let solver = EquilibriumSolver::default();
    let base = Pose::new(0.0, 0.0, 0.0);

    for (name, profile) in profiles {
        let config = AntennaConfig::with_profile(profile);
        let state = solver.solve(&config, &base, &env)?;
        let deg: Vec<String> = state
            .joint_deflections
            .iter()
            .map(|t| format!("{:5.1}", t.to_degrees()))
            .collect();
        println!(
            "{name:<18} joints [{}] deg  total {:5.1} deg  tip ({:.3}, {:.3})  force {:.2} mN  residual {:.1e}",
            deg.join(" "),
            state.total_bend.to_degrees(),
            state.tip().x,
            state.tip().y,
            state.max_contact_force() * 1e3,
            state.residual
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
