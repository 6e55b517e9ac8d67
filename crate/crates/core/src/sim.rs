//! Seeded Monte Carlo simulation of the queue.
//!
//! # Random stream
//!
//! Episode `i` of a run with seed `seed` draws its noise from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i` with
//! `set_stream(i)`. Each draw takes one `next_u64()` and keeps its top 53
//! bits: `w = (x >> 11) * 2^-53`, a uniform value in `[0, 1)`. ChaCha and the
//! `seed_from_u64` expansion are specified independently of platform, so a
//! run replays bit for bit anywhere. A single [`simulate_episode`] call with
//! seed `seed` is episode 0 of [`mc_estimate`] with the same seed.

use crate::model::{State, ValidatedModel};
use crate::solver::PolicyTable;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("state {0} is terminal or outside the state space")]
    InvalidState(State),
    #[error("noise value {0} is outside [0, 1]")]
    InvalidNoise(f64),
    #[error("action index {0} is out of range")]
    InvalidAction(usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("policy does not match the model: {0}")]
    PolicyMismatch(String),
}

/// What happened to the head-of-line job in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Event {
    /// Service succeeded; the reward was collected.
    Completed,
    /// Service failed and the job lost one unit of value.
    Decayed,
    /// Service failed at value 1; the job left without reward.
    Ejected,
}

/// Outcome of one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub next: State,
    pub stage_cost: f64,
    pub event: Event,
}

/// Advances one slot from a nonterminal `state` under action `action` and
/// noise `w`. Service succeeds when `w <= s`.
///
/// ```
/// use decayqueue::model::{State, ValidatedModel};
/// use decayqueue::sim::{step, Event};
///
/// let model = ValidatedModel::from_tables(vec![1.0], vec![0.0], vec![0.0], vec![1.0]).unwrap();
/// let t = step(&model, State::new(1, 1), 0, 0.5).unwrap();
/// assert_eq!(t.next, State::terminal(1));
/// assert_eq!(t.stage_cost, 1.0);
/// assert_eq!(t.event, Event::Ejected);
/// ```
pub fn step(model: &ValidatedModel, state: State, action: usize, w: f64) -> Result<Transition, SimError> {
    if state.is_terminal() || !model.contains(state) {
        return Err(SimError::InvalidState(state));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(SimError::InvalidNoise(w));
    }
    let s = model.actions().get(action).ok_or(SimError::InvalidAction(action))?;
    let base = model.holding(state.jobs) + model.service_cost(action);
    let max_value = model.max_value();
    Ok(if w <= s {
        Transition {
            next: State::new(state.jobs - 1, max_value),
            stage_cost: base - model.reward(state.value),
            event: Event::Completed,
        }
    } else if state.value > 1 {
        Transition {
            next: State::new(state.jobs, state.value - 1),
            stage_cost: base,
            event: Event::Decayed,
        }
    } else {
        Transition {
            next: State::new(state.jobs - 1, max_value),
            stage_cost: base,
            event: Event::Ejected,
        }
    })
}

/// One slot of a simulated episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub state: State,
    pub action: usize,
    pub w: f64,
    pub stage_cost: f64,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub total_cost: f64,
}

#[derive(Serialize)]
struct StepLine {
    t: usize,
    b: usize,
    v: usize,
    s: f64,
    w: f64,
    cost: f64,
    event: Event,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Writes one JSON object per step with fields `t, b, v, s, w, cost, event`.
    pub fn write_jsonl<W: Write>(&self, model: &ValidatedModel, mut out: W) -> io::Result<()> {
        for (t, step) in self.steps.iter().enumerate() {
            let line = StepLine {
                t,
                b: step.state.jobs,
                v: step.state.value,
                s: model.action(step.action),
                w: step.w,
                cost: step.stage_cost,
                event: step.event,
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// The noise generator for episode `episode` of a run seeded with `seed`.
pub fn episode_rng(seed: u64, episode: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode);
    rng
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_inputs(model: &ValidatedModel, policy: &PolicyTable, initial: State) -> Result<(), SimError> {
    policy
        .check(model)
        .map_err(|e| SimError::PolicyMismatch(e.to_string()))?;
    if initial.is_terminal() || !model.contains(initial) {
        return Err(SimError::InvalidState(initial));
    }
    Ok(())
}

fn run_episode(model: &ValidatedModel, policy: &PolicyTable, initial: State, rng: &mut ChaCha8Rng) -> Trajectory {
    let mut state = initial;
    let mut steps = Vec::new();
    let mut total_cost = 0.0;
    while !state.is_terminal() {
        let action = policy.at(state);
        let w = uniform(rng);
        let t = step(model, state, action, w).expect("inputs checked");
        steps.push(Step {
            state,
            action,
            w,
            stage_cost: t.stage_cost,
            event: t.event,
        });
        total_cost += t.stage_cost;
        state = t.next;
    }
    Trajectory { steps, total_cost }
}

/// Total cost of one episode without recording its steps.
fn episode_cost(model: &ValidatedModel, policy: &PolicyTable, initial: State, rng: &mut ChaCha8Rng) -> f64 {
    let mut state = initial;
    let mut total = 0.0;
    while !state.is_terminal() {
        let t = step(model, state, policy.at(state), uniform(rng)).expect("inputs checked");
        total += t.stage_cost;
        state = t.next;
    }
    total
}

/// Simulates one episode from `initial` until absorption.
pub fn simulate_episode(
    model: &ValidatedModel,
    policy: &PolicyTable,
    initial: State,
    seed: u64,
) -> Result<Trajectory, SimError> {
    check_inputs(model, policy, initial)?;
    Ok(run_episode(model, policy, initial, &mut episode_rng(seed, 0)))
}

/// Sample mean of the total cost with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateResult {
    pub mean: f64,
    /// `sqrt(sample variance / n)`; 0 by convention when `n = 1`.
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

impl EstimateResult {
    /// False when `std_error` is the `n = 1` convention rather than an estimate.
    pub fn std_error_defined(&self) -> bool {
        self.n > 1
    }

    /// Summarizes samples in order. The mean is accumulated relative to the
    /// first sample, so identical samples give that value back exactly.
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self, SimError> {
        let (&first, _) = samples.split_first().ok_or(SimError::NoSamples)?;
        let n = samples.len();
        let shift: f64 = samples.iter().map(|x| x - first).sum::<f64>() / n as f64;
        let mean = first + shift;
        let std_error = if n == 1 {
            0.0
        } else {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        };
        Ok(EstimateResult {
            mean,
            std_error,
            n,
            seed,
        })
    }
}

/// Runs `n` episodes from `initial`, episode `i` on stream `i`.
///
/// Episodes run in parallel; their costs are reduced in episode order, so
/// the result does not depend on scheduling.
pub fn mc_estimate(
    model: &ValidatedModel,
    policy: &PolicyTable,
    initial: State,
    n: usize,
    seed: u64,
) -> Result<EstimateResult, SimError> {
    if n == 0 {
        return Err(SimError::NoSamples);
    }
    check_inputs(model, policy, initial)?;
    let costs: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| episode_cost(model, policy, initial, &mut episode_rng(seed, i)))
        .collect();
    EstimateResult::from_samples(&costs, seed)
}
