mod common;

use common::{arb_model, exact_policy_value, model_suite, SMALL, TINY};
use decayqueue::model::State;
use decayqueue::sim::{mc_estimate, simulate_episode, Event};
use decayqueue::solver::{solve_recursive, PolicyTable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trajectory_invariants(model in arb_model(SMALL), seed in any::<u64>(), salt in any::<u64>()) {
        let policy = PolicyTable::from_fn(model.jobs(), model.max_value(), |b, v| {
            ((salt >> ((3 * b + v) % 61)) as usize) % model.num_actions()
        });
        let traj = simulate_episode(&model, &policy, model.initial_state(), seed).unwrap();
        prop_assert!(traj.len() <= model.num_states());
        let total: f64 = traj.steps.iter().map(|s| s.stage_cost).sum();
        prop_assert_eq!(total, traj.total_cost);
        for pair in traj.steps.windows(2) {
            let (a, b) = (pair[0].state, pair[1].state);
            match pair[0].event {
                Event::Decayed => prop_assert_eq!(b, State::new(a.jobs, a.value - 1)),
                Event::Completed | Event::Ejected => prop_assert_eq!(b, State::new(a.jobs - 1, model.max_value())),
            }
        }
        let last = traj.steps.last().unwrap();
        prop_assert_eq!(last.state.jobs, 1);
        prop_assert!(matches!(last.event, Event::Completed | Event::Ejected));
    }
}

#[test]
fn estimates_match_exact_policy_values() {
    let models = model_suite(0x5eed, 100, TINY);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut within = 0;
    for (i, model) in models.iter().enumerate() {
        let flat: Vec<usize> = (0..model.num_states())
            .map(|_| rng.random_range(0..model.num_actions()))
            .collect();
        let policy = PolicyTable::from_fn(model.jobs(), model.max_value(), |b, v| {
            flat[(b - 1) * model.max_value() + v - 1]
        });
        let exact = *exact_policy_value(model, &flat).last().unwrap();
        let est = mc_estimate(model, &policy, model.initial_state(), 100_000, i as u64).unwrap();
        if (est.mean - exact).abs() <= 4.0 * est.std_error || (est.std_error == 0.0 && (est.mean - exact).abs() <= 1e-9)
        {
            within += 1;
        }
    }
    assert!(within >= 99, "only {within} of 100 policies within 4 standard errors");
}

#[test]
fn optimal_policy_estimate_matches_solver() {
    for (i, model) in model_suite(7, 10, SMALL).iter().enumerate() {
        let sol = solve_recursive(model);
        let est = mc_estimate(model, sol.policy(), model.initial_state(), 20_000, i as u64).unwrap();
        let j = sol.j(model.jobs(), model.max_value());
        assert!(
            (est.mean - j).abs() <= 4.0 * est.std_error + 1e-9,
            "model {i}: {} vs {j} (se {})",
            est.mean,
            est.std_error
        );
    }
}

#[test]
fn first_episode_of_estimate_is_the_single_episode() {
    let model = &model_suite(3, 1, SMALL)[0];
    let sol = solve_recursive(model);
    let traj = simulate_episode(model, sol.policy(), model.initial_state(), 42).unwrap();
    let est = mc_estimate(model, sol.policy(), model.initial_state(), 1, 42).unwrap();
    assert_eq!(est.mean.to_bits(), traj.total_cost.to_bits());
}
