use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tactile_antenna::controller::ControllerState;
use tactile_antenna::gait::{GaitConfig, Maneuver};
use tactile_antenna::geometry::{Pose, Vec2};
use tactile_antenna::harness::{robot_solver_options, TunnelSetup};
use tactile_antenna::mechanics::{paper_descending_profile, EquilibriumSolver};
use tactile_antenna::sensing::SensorPipeline;
use tactile_antenna::world::env::Shape;
use tactile_antenna::world::{
    antenna_contacts, step_robot, Environment, Obstacle, RobotConfig, RobotModel, RobotState, TunnelLayout,
};

fn model() -> RobotModel {
    RobotModel::new(RobotConfig::default(), paper_descending_profile()).unwrap()
}

fn maneuver() -> impl Strategy<Value = Maneuver> {
    prop::sample::select(Maneuver::ALL.to_vec())
}

/// Deepest point of a densely sampled segment inside a circle.
fn sampled_depth(a: Vec2, b: Vec2, center: Vec2, radius: f64) -> Option<f64> {
    let n = 20_000;
    (0..=n)
        .map(|i| radius - (a + (b - a) * (i as f64 / n as f64)).distance(center))
        .filter(|d| *d >= 0.0)
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |m| m.max(d))))
}

fn chain() -> impl Strategy<Value = Vec<Vec2>> {
    (prop::collection::vec(-0.6..0.6f64, 6), -3.0..3.0f64).prop_map(|(bends, heading)| {
        let mut p = Vec2::new(0.0, 0.0);
        let mut a = heading;
        let mut out = vec![p];
        for b in bends {
            a += b;
            p += Vec2::from_angle(a) * 0.03;
            out.push(p);
        }
        out
    })
}

fn circles() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-0.2..0.2f64, -0.2..0.2f64, 0.003..0.05f64), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn contacts_match_dense_sampling(points in chain(), obstacles in circles()) {
        let env = obstacles
            .iter()
            .fold(Environment::empty(), |e, &(x, y, r)| e.with_obstacle(Obstacle::circle(Vec2::new(x, y), r)));
        let hits = antenna_contacts(&points, &env);
        for (link, pair) in points.windows(2).enumerate() {
            for (k, obs) in env.obstacles.iter().enumerate() {
                let Shape::Circle { center, radius } = obs.shape else { unreachable!() };
                let oracle = sampled_depth(pair[0], pair[1], center, radius);
                let found = hits.iter().find(|h| h.link == link && h.obstacle == k);
                match (oracle, found) {
                    (Some(d), Some(h)) => prop_assert!((d - h.penetration).abs() < 1e-5),
                    (None, None) => {}
                    // Sampling can step over a shallow chord.
                    (Some(d), None) => prop_assert!(d < 1e-5, "missed link {} obstacle {} depth {}", link, k, d),
                    (None, Some(h)) => prop_assert!(h.penetration < 1e-5),
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn steps_keep_the_body_out_of_fixed_obstacles(
        ms in prop::collection::vec(maneuver(), 1..6),
        wall_x in 0.3..0.7f64,
        post in (0.3..0.6f64, -0.3..0.3f64),
    ) {
        let model = model();
        let solver = EquilibriumSolver::new(robot_solver_options());
        let mut env = Environment::empty()
            .with_obstacle(Obstacle::wall(Vec2::new(wall_x, -0.5), Vec2::new(wall_x, 0.5)))
            .with_obstacle(Obstacle::circle(Vec2::new(post.0, post.1), 0.03));
        let mut s = RobotState::new(&model, Pose::new(0.0, 0.0, 0.0), &env, &solver).unwrap();
        let gait = GaitConfig::default();
        for m in ms {
            for _ in 0..40 {
                s = step_robot(&s, m, &gait, 0.01, &mut env, &model, &solver).unwrap();
                prop_assert!(s.max_fixed_penetration(&env) <= 1e-3);
            }
        }
    }

    #[test]
    fn step_is_bit_identical_on_repeat(m in maneuver(), y in -0.2..0.2f64) {
        let model = model();
        let solver = EquilibriumSolver::new(robot_solver_options());
        let env0 = Environment::empty()
            .with_obstacle(Obstacle::circle(Vec2::new(0.3, y), 0.03).movable(0.02));
        let s0 = RobotState::new(&model, Pose::new(0.0, 0.0, 0.0), &env0, &solver).unwrap();
        let run = || {
            let mut env = env0.clone();
            let mut s = s0.clone();
            for _ in 0..150 {
                s = step_robot(&s, m, &GaitConfig::default(), 0.01, &mut env, &model, &solver).unwrap();
            }
            (s, env)
        };
        let (a, ea) = run();
        let (b, eb) = run();
        prop_assert_eq!(a, b);
        prop_assert_eq!(ea, eb);
    }
}

/// Noise-free closed-loop run from a given start, returning (pose, maneuver)
/// per step.
fn closed_loop(setup: &TunnelSetup, mut env: Environment, start: Pose, seconds: f64) -> Vec<(Pose, Maneuver)> {
    let model = RobotModel::new(setup.robot.clone(), setup.profile.clone()).unwrap();
    let solver = EquilibriumSolver::new(setup.solver);
    let mut sensors = SensorPipeline::new(setup.sensor, setup.calibration, setup.averaging_span).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut controller = ControllerState::new();
    let dt = setup.sensor.sample_period();
    let mut state = RobotState::new(&model, start, &env, &solver).unwrap();
    let mut out = Vec::new();
    for i in 0..(seconds / dt) as usize {
        let frame = sensors
            .sample(i as f64 * dt, state.left.total_bend, state.right.total_bend, &mut rng)
            .unwrap();
        let m = controller.step_frame(&frame, &setup.controller).unwrap();
        out.push((state.head, m));
        state = step_robot(&state, m, &setup.gait, dt, &mut env, &model, &solver).unwrap();
    }
    out
}

#[test]
fn mirrored_tunnel_gives_mirrored_run() {
    let mut setup = TunnelSetup::default();
    setup.sensor.noise_std = 0.0;
    let layout = TunnelLayout::default();
    for seed in [0, 1] {
        let tunnel = layout.build(seed).unwrap();
        let a = closed_loop(&setup, tunnel.env.clone(), tunnel.start, 15.0);
        let b = closed_loop(&setup, tunnel.env.mirrored(), tunnel.start.mirrored(), 15.0);
        let mut turns = 0;
        for (i, ((pa, ma), (pb, mb))) in a.iter().zip(&b).enumerate() {
            assert_eq!(*mb, ma.mirrored(), "seed {seed} step {i}");
            assert!(
                (pa.x - pb.x).abs() < 1e-6 && (pa.y + pb.y).abs() < 1e-6,
                "seed {seed} step {i}"
            );
            assert!((pa.heading + pb.heading).abs() < 1e-6, "seed {seed} step {i}");
            turns += usize::from(matches!(ma, Maneuver::TurnLeft | Maneuver::TurnRight));
        }
        assert!(turns > 0, "seed {seed} never turned");
    }
}
