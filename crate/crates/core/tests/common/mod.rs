#![allow(dead_code)]

use decayqueue::model::ValidatedModel;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shape limits for a randomized model.
#[derive(Clone, Copy)]
pub struct Limits {
    pub jobs: usize,
    pub values: usize,
    pub actions: usize,
}

pub const SMALL: Limits = Limits {
    jobs: 6,
    values: 6,
    actions: 4,
};

pub const TINY: Limits = Limits {
    jobs: 3,
    values: 3,
    actions: 3,
};

fn nondecreasing(rng: &mut ChaCha8Rng, n: usize, start: f64, step: f64, dyadic: bool) -> Vec<f64> {
    let mut x = start;
    (0..n)
        .map(|_| {
            let inc = if dyadic {
                rng.random_range(0..4) as f64 * 0.25
            } else if rng.random_bool(0.2) {
                0.0
            } else {
                rng.random_range(0.0..step)
            };
            x += inc;
            x
        })
        .collect()
}

/// A random model with non-decreasing `h`, `c`, `r`.
///
/// A quarter of the models use dyadic tables and actions (multiples of 1/4
/// and 1/8), where every solver's arithmetic is exact and ties are common.
/// Another quarter use a constant reward.
pub fn random_model(rng: &mut ChaCha8Rng, limits: Limits) -> ValidatedModel {
    let jobs = rng.random_range(1..=limits.jobs);
    let values = rng.random_range(1..=limits.values);
    let n_actions = rng.random_range(1..=limits.actions);
    let dyadic = rng.random_bool(0.25);
    let constant_reward = rng.random_bool(0.25);

    let mut actions: Vec<f64> = Vec::new();
    while actions.len() < n_actions {
        let s = if dyadic {
            rng.random_range(0..=8) as f64 / 8.0
        } else if rng.random_bool(0.1) {
            if rng.random_bool(0.5) {
                0.0
            } else {
                1.0
            }
        } else {
            rng.random_range(0.0..1.0)
        };
        if !actions.contains(&s) {
            actions.push(s);
        }
    }
    actions.sort_by(f64::total_cmp);

    let h_start = if dyadic {
        rng.random_range(0..4) as f64 * 0.25
    } else {
        rng.random_range(0.0..2.0)
    };
    let h = nondecreasing(rng, jobs, h_start, 1.5, dyadic);
    let c_start = if dyadic {
        rng.random_range(0..4) as f64 * 0.25
    } else {
        rng.random_range(0.0..1.0)
    };
    let c = nondecreasing(rng, n_actions, c_start, 3.0, dyadic);
    let r = if constant_reward {
        let r_bar = if dyadic {
            rng.random_range(1..16) as f64 * 0.5
        } else {
            rng.random_range(0.1..8.0)
        };
        vec![r_bar; values]
    } else {
        let r_start = if dyadic {
            rng.random_range(1..8) as f64 * 0.5
        } else {
            rng.random_range(0.1..4.0)
        };
        nondecreasing(rng, values, r_start, 3.0, dyadic)
    };
    ValidatedModel::from_tables(h, actions, c, r).expect("generated model is valid")
}

/// `count` models from a fixed seed.
pub fn model_suite(seed: u64, count: usize, limits: Limits) -> Vec<ValidatedModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_model(&mut rng, limits)).collect()
}

/// Proptest strategy wrapping [`random_model`].
pub fn arb_model(limits: Limits) -> impl Strategy<Value = ValidatedModel> {
    any::<u64>().prop_map(move |seed| random_model(&mut ChaCha8Rng::seed_from_u64(seed), limits))
}

/// Exact value of a stationary policy given as a flat action-index list in
/// b-major order, computed from the raw tables. Returns `J(b, v)` for every
/// nonterminal state in the same order.
pub fn exact_policy_value(model: &ValidatedModel, policy: &[usize]) -> Vec<f64> {
    let (jobs, values) = (model.jobs(), model.max_value());
    let h = model.holding_table();
    let c = model.service_cost_table();
    let r = model.reward_table();
    let s = model.actions().as_slice();
    let mut j = vec![0.0; jobs * values];
    for b in 1..=jobs {
        let after = if b == 1 { 0.0 } else { j[(b - 2) * values + values - 1] };
        for v in 1..=values {
            let a = policy[(b - 1) * values + v - 1];
            let fail = if v == 1 { after } else { j[(b - 1) * values + v - 2] };
            // Success: collect r(v), move to the next job. Failure: decay or eject.
            j[(b - 1) * values + v - 1] = h[b - 1] + c[a] + s[a] * (after - r[v - 1]) + (1.0 - s[a]) * fail;
        }
    }
    j
}

/// Minimum of `J(B, V)` over every stationary policy.
pub fn brute_force_optimum(model: &ValidatedModel) -> f64 {
    let n_states = model.num_states();
    let n_actions = model.num_actions();
    let mut policy = vec![0usize; n_states];
    let mut best = f64::INFINITY;
    loop {
        let j = exact_policy_value(model, &policy);
        best = best.min(j[n_states - 1]);
        // Odometer increment over all n_actions^n_states policies.
        let mut k = 0;
        loop {
            if k == n_states {
                return best;
            }
            policy[k] += 1;
            if policy[k] < n_actions {
                break;
            }
            policy[k] = 0;
            k += 1;
        }
    }
}

/// Largest `|r(v) + sigma(b, v - 1)|` over the state space, at least 1.
pub fn grid_scale(model: &ValidatedModel, sol: &decayqueue::SolutionTable) -> f64 {
    let mut m: f64 = 0.0;
    for b in 1..=model.jobs() {
        for v in 1..=model.max_value() {
            m = m.max((model.reward(v) + sol.sigma(b, v - 1)).abs());
        }
    }
    if m == 0.0 {
        1.0
    } else {
        m
    }
}

/// `n` evenly spaced points covering `[-2 scale, 2 scale]`.
pub fn x_grid(scale: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -2.0 * scale + 4.0 * scale * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Like [`arb_model`] but only constant-reward models.
pub fn arb_constant_reward_model(limits: Limits) -> impl Strategy<Value = ValidatedModel> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let model = random_model(&mut rng, limits);
            if model.constant_reward().is_some() {
                return model;
            }
        }
    })
}
