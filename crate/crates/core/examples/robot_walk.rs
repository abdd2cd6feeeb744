// Step the robot body toward a wall and print pose and antenna bend.

use tactile_antenna::gait::{GaitConfig, Maneuver};
use tactile_antenna::geometry::{Pose, Vec2};
use tactile_antenna::mechanics::{paper_descending_profile, EquilibriumSolver};
use tactile_antenna::world::{step_robot, Environment, Obstacle, RobotConfig, RobotModel, RobotState};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    let model = RobotModel::new(RobotConfig::default(), paper_descending_profile())?;
    let gait = GaitConfig::default();
    let solver = EquilibriumSolver::default();
    let mut env = Environment::empty().with_obstacle(Obstacle::wall(Vec2::new(0.4, -0.5), Vec2::new(0.4, 0.5)));
    let mut state = RobotState::new(&model, Pose::new(0.0, 0.0, 0.0), &env, &solver)?;

    let dt = 0.01;
    for i in 1..=200 {
        state = step_robot(&state, Maneuver::Forward, &gait, dt, &mut env, &model, &solver)?;
        if i % 25 == 0 {
            println!(
                "t {:4.2}  head ({:.3}, {:+.3})  bend L {:5.1} deg  R {:5.1} deg  stuck {:.2} s",
                state.t,
                state.head.x,
                state.head.y,
                state.left.total_bend.to_degrees(),
                state.right.total_bend.to_degrees(),
                state.stuck_timer
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
