//! Optimal cost-to-go and optimal policy.
//!
//! Three independent routes produce the same [`SolutionTable`]:
//!
//! * [`solve_recursive`] runs the increment recursion. For each job count
//!   `b` it builds `delta(b, v)` and its running sum `sigma(b, v)` one value
//!   step at a time and assembles `J` from the increments.
//! * [`value_iteration`] applies the Bellman operator to the whole state
//!   space until the sup-norm change drops below a tolerance.
//! * [`policy_iteration`] alternates exact policy evaluation with greedy
//!   improvement.
//!
//! Every route breaks ties toward the smallest service probability, using
//! exact floating-point equality.
//!
//! The transition graph is acyclic: from `(b, v)` the chain moves to
//! `(b, v - 1)` or `(b - 1, V)`. Visiting states with `b` ascending and `v`
//! ascending is therefore a topological order, and a single sweep in that
//! order is already exact.

use crate::model::{State, ValidatedModel};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value iteration did not converge after {sweeps} sweeps (sup-norm residual {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },
    #[error("solution CSV line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

/// Which algorithm produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Recursive,
    ValueIteration,
    PolicyIteration,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Recursive => "recursive",
            SolverKind::ValueIteration => "vi",
            SolverKind::PolicyIteration => "pi",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "recursive" => Ok(SolverKind::Recursive),
            "vi" | "value_iteration" => Ok(SolverKind::ValueIteration),
            "pi" | "policy_iteration" => Ok(SolverKind::PolicyIteration),
            other => Err(format!("unknown solver `{other}` (expected recursive, vi or pi)")),
        }
    }
}

/// Cost-to-go over the state space. The terminal entry `(0, V)` is fixed at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    jobs: usize,
    max_value: usize,
    values: Vec<f64>,
}

impl CostTable {
    pub fn zeros(jobs: usize, max_value: usize) -> Self {
        CostTable {
            jobs,
            max_value,
            values: vec![0.0; jobs * max_value],
        }
    }

    fn offset(&self, b: usize, v: usize) -> usize {
        debug_assert!((1..=self.jobs).contains(&b) && (1..=self.max_value).contains(&v));
        (b - 1) * self.max_value + (v - 1)
    }

    /// `J(b, v)`; `J(0, V)` is 0.
    pub fn get(&self, b: usize, v: usize) -> f64 {
        if b == 0 {
            debug_assert_eq!(v, self.max_value, "the only state with b = 0 is (0, V)");
            0.0
        } else {
            self.values[self.offset(b, v)]
        }
    }

    /// Sets a nonterminal entry.
    pub fn set(&mut self, b: usize, v: usize, x: f64) {
        let i = self.offset(b, v);
        self.values[i] = x;
    }

    pub fn at(&self, state: State) -> f64 {
        self.get(state.jobs, state.value)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn max_value(&self) -> usize {
        self.max_value
    }

    /// Largest absolute entrywise difference.
    pub fn sup_distance(&self, other: &CostTable) -> f64 {
        assert_eq!((self.jobs, self.max_value), (other.jobs, other.max_value));
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A stationary policy: an action index for every nonterminal state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyTable {
    jobs: usize,
    max_value: usize,
    action_index: Vec<usize>,
}

impl PolicyTable {
    /// The policy choosing action `index` everywhere.
    pub fn constant(jobs: usize, max_value: usize, index: usize) -> Self {
        PolicyTable {
            jobs,
            max_value,
            action_index: vec![index; jobs * max_value],
        }
    }

    pub fn from_fn(jobs: usize, max_value: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut action_index = Vec::with_capacity(jobs * max_value);
        for b in 1..=jobs {
            for v in 1..=max_value {
                action_index.push(f(b, v));
            }
        }
        PolicyTable {
            jobs,
            max_value,
            action_index,
        }
    }

    /// Action index at `(b, v)`, `1 <= b <= B`, `1 <= v <= V`.
    pub fn get(&self, b: usize, v: usize) -> usize {
        self.action_index[(b - 1) * self.max_value + (v - 1)]
    }

    pub fn set(&mut self, b: usize, v: usize, index: usize) {
        self.action_index[(b - 1) * self.max_value + (v - 1)] = index;
    }

    pub fn at(&self, state: State) -> usize {
        self.get(state.jobs, state.value)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn max_value(&self) -> usize {
        self.max_value
    }

    /// Checks the shape against `model` and every entry against its action set.
    pub fn check(&self, model: &ValidatedModel) -> Result<(), SolverError> {
        if (self.jobs, self.max_value) != (model.jobs(), model.max_value()) {
            return Err(SolverError::InvalidArgument(format!(
                "policy is {}x{} but the model is {}x{}",
                self.jobs,
                self.max_value,
                model.jobs(),
                model.max_value()
            )));
        }
        match self.action_index.iter().find(|&&a| a >= model.num_actions()) {
            Some(a) => Err(SolverError::InvalidArgument(format!(
                "action index {a} out of range for {} actions",
                model.num_actions()
            ))),
            None => Ok(()),
        }
    }
}

/// Work counters reported alongside a solution.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    /// Number of single-action objective evaluations.
    pub evaluations: usize,
    /// Value-iteration sweeps, or policy evaluations for policy iteration.
    pub iterations: usize,
    /// Policy changes made by policy iteration.
    pub improvements: usize,
    /// Sup-norm change of the final value-iteration sweep.
    pub residual: f64,
}

/// Cost-to-go, optimal policy and the increment tables `delta`, `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    j: CostTable,
    mu: PolicyTable,
    // Both indexed by (b, v) with v in 0..=V.
    delta: Vec<f64>,
    sigma: Vec<f64>,
    solver: SolverKind,
    stats: SolveStats,
}

impl SolutionTable {
    pub fn cost(&self) -> &CostTable {
        &self.j
    }

    /// `J(b, v)`
    pub fn j(&self, b: usize, v: usize) -> f64 {
        self.j.get(b, v)
    }

    pub fn policy(&self) -> &PolicyTable {
        &self.mu
    }

    /// Index of the optimal action at `(b, v)`.
    pub fn mu(&self, b: usize, v: usize) -> usize {
        self.mu.get(b, v)
    }

    /// `delta(b, v)` for `0 <= v <= V`.
    pub fn delta(&self, b: usize, v: usize) -> f64 {
        self.delta[self.inc_offset(b, v)]
    }

    /// `sigma(b, v)` for `0 <= v <= V`.
    pub fn sigma(&self, b: usize, v: usize) -> f64 {
        self.sigma[self.inc_offset(b, v)]
    }

    pub fn solver(&self) -> SolverKind {
        self.solver
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn jobs(&self) -> usize {
        self.j.jobs
    }

    pub fn max_value(&self) -> usize {
        self.j.max_value
    }

    fn inc_offset(&self, b: usize, v: usize) -> usize {
        debug_assert!((1..=self.jobs()).contains(&b) && v <= self.max_value());
        (b - 1) * (self.max_value() + 1) + v
    }

    /// Builds a table from `J` and `mu`, deriving `delta` from successive
    /// differences of `J` and `sigma` as its running sum.
    fn from_cost(j: CostTable, mu: PolicyTable, solver: SolverKind, stats: SolveStats) -> Self {
        let (jobs, max_value) = (j.jobs, j.max_value);
        let mut delta = vec![0.0; jobs * (max_value + 1)];
        let mut sigma = vec![0.0; jobs * (max_value + 1)];
        for b in 1..=jobs {
            let row = (b - 1) * (max_value + 1);
            let mut running = 0.0;
            for v in 1..=max_value {
                let previous = if v == 1 {
                    j.get(b - 1, max_value)
                } else {
                    j.get(b, v - 1)
                };
                let d = j.get(b, v) - previous;
                running += d;
                delta[row + v] = d;
                sigma[row + v] = running;
            }
        }
        SolutionTable {
            j,
            mu,
            delta,
            sigma,
            solver,
            stats,
        }
    }

    /// Serializes as CSV with header `b,v,J,mu_index,mu_value,delta,sigma`:
    /// one row per nonterminal state in b-major order, then the terminal row.
    pub fn to_csv(&self, model: &ValidatedModel) -> String {
        let mut out = String::from("b,v,J,mu_index,mu_value,delta,sigma\n");
        for b in 1..=self.jobs() {
            for v in 1..=self.max_value() {
                let a = self.mu(b, v);
                out.push_str(&format!(
                    "{b},{v},{},{a},{},{},{}\n",
                    self.j(b, v),
                    model.action(a),
                    self.delta(b, v),
                    self.sigma(b, v)
                ));
            }
        }
        out.push_str(&format!("0,{},0,,,,\n", self.max_value()));
        out
    }

    /// Parses the output of [`SolutionTable::to_csv`] for `model`.
    pub fn from_csv(text: &str, model: &ValidatedModel, solver: SolverKind) -> Result<Self, SolverError> {
        let err = |line: usize, reason: String| SolverError::Csv { line, reason };
        let (jobs, max_value) = (model.jobs(), model.max_value());
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, "b,v,J,mu_index,mu_value,delta,sigma")) => {}
            Some((n, other)) => return Err(err(n, format!("unexpected header `{other}`"))),
            None => return Err(err(1, "empty document".into())),
        }
        let mut j = CostTable::zeros(jobs, max_value);
        let mut mu = PolicyTable::constant(jobs, max_value, 0);
        let mut delta = vec![0.0; jobs * (max_value + 1)];
        let mut sigma = vec![0.0; jobs * (max_value + 1)];
        for b in 1..=jobs {
            for v in 1..=max_value {
                let (n, line) = lines
                    .next()
                    .ok_or_else(|| err(0, format!("missing row for ({b}, {v})")))?;
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 7 {
                    return Err(err(n, format!("expected 7 fields, got {}", fields.len())));
                }
                let float = |k: usize| fields[k].parse::<f64>().map_err(|e| err(n, format!("field {k}: {e}")));
                let int = |k: usize| {
                    fields[k]
                        .parse::<usize>()
                        .map_err(|e| err(n, format!("field {k}: {e}")))
                };
                if (int(0)?, int(1)?) != (b, v) {
                    return Err(err(n, format!("expected state ({b}, {v})")));
                }
                let a = int(3)?;
                if a >= model.num_actions() || float(4)? != model.action(a) {
                    return Err(err(n, format!("action {a} does not match the model's action set")));
                }
                j.set(b, v, float(2)?);
                mu.set(b, v, a);
                let k = (b - 1) * (max_value + 1) + v;
                delta[k] = float(5)?;
                sigma[k] = float(6)?;
            }
        }
        let terminal = format!("0,{max_value},0,,,,");
        match lines.next() {
            Some((_, line)) if line == terminal => {}
            Some((n, line)) => return Err(err(n, format!("expected terminal row `{terminal}`, got `{line}`"))),
            None => return Err(err(0, "missing terminal row".into())),
        }
        if let Some((n, _)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(err(n, "trailing content after the terminal row".into()));
        }
        Ok(SolutionTable {
            j,
            mu,
            delta,
            sigma,
            solver,
            stats: SolveStats::default(),
        })
    }
}

/// Minimizes `c(s) - s * x` over the action set. Returns the minimum and the
/// smallest minimizing index.
fn minimize_linearized(model: &ValidatedModel, x: f64) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for a in 0..model.num_actions() {
        let objective = model.service_cost(a) - model.action(a) * x;
        if objective < best.0 {
            best = (objective, a);
        }
    }
    best
}

/// The monotone action selector `g(x)`: the smallest minimizer of
/// `c(s) - s * x`.
///
/// Because `c(s) - s * x` is submodular in `(s, x)`, the selected index is
/// non-decreasing in `x`. The optimal policy factors through it as
/// `mu(b, v) = g(r(v) + sigma(b, v - 1))`.
pub fn select_action(model: &ValidatedModel, x: f64) -> usize {
    minimize_linearized(model, x).1
}

/// The one-step operator `x + h(b) + min_s { c(s) - s (r(v) + x) }`.
///
/// It is non-decreasing in `x`, and `sigma(b, v)` is obtained by applying it
/// to `sigma(b, v - 1)`. The arithmetic matches [`solve_recursive`] exactly,
/// so that identity holds bit for bit.
pub fn step_operator(model: &ValidatedModel, b: usize, v: usize, x: f64) -> f64 {
    x + increment(model, b, v, x).0
}

/// `h(b) + min_s { c(s) - s (r(v) + x) }` and its minimizer.
fn increment(model: &ValidatedModel, b: usize, v: usize, x: f64) -> (f64, usize) {
    let (m, a) = minimize_linearized(model, model.reward(v) + x);
    (model.holding(b) + m, a)
}

/// Bellman objective at `(b, v)` for action `a` given a cost-to-go table.
fn objective(model: &ValidatedModel, j: &CostTable, b: usize, v: usize, a: usize) -> f64 {
    let s = model.action(a);
    let v_max = model.max_value();
    let reset = j.get(b - 1, v_max);
    let fail = if v > 1 { j.get(b, v - 1) } else { reset };
    model.service_cost(a) + model.holding(b) + s * (-model.reward(v) + reset) + (1.0 - s) * fail
}

/// One Bellman backup at `(b, v)`: the minimum over actions and the smallest
/// minimizing action index.
pub fn bellman_backup(model: &ValidatedModel, j: &CostTable, b: usize, v: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for a in 0..model.num_actions() {
        let q = objective(model, j, b, v, a);
        if q < best.0 {
            best = (q, a);
        }
    }
    best
}

/// Solves by the increment recursion in exactly `B * V * |S|` objective
/// evaluations.
///
/// ```
/// use decayqueue::model::ValidatedModel;
/// use decayqueue::solver::solve_recursive;
///
/// // One job, V = 2, actions {0, 1}, c = [0, 1], r = [1, 3].
/// let model = ValidatedModel::from_tables(vec![0.0], vec![0.0, 1.0], vec![0.0, 1.0], vec![1.0, 3.0]).unwrap();
/// let sol = solve_recursive(&model);
/// assert_eq!(sol.mu(1, 1), 0); // tie at v = 1 goes to s = 0
/// assert_eq!(sol.mu(1, 2), 1);
/// assert_eq!(sol.j(1, 2), -2.0);
/// ```
pub fn solve_recursive(model: &ValidatedModel) -> SolutionTable {
    let (jobs, max_value) = (model.jobs(), model.max_value());
    let mut j = CostTable::zeros(jobs, max_value);
    let mut mu = PolicyTable::constant(jobs, max_value, 0);
    let mut delta = vec![0.0; jobs * (max_value + 1)];
    let mut sigma = vec![0.0; jobs * (max_value + 1)];
    for b in 1..=jobs {
        let row = (b - 1) * (max_value + 1);
        let mut previous = j.get(b - 1, max_value);
        for v in 1..=max_value {
            let (d, a) = increment(model, b, v, sigma[row + v - 1]);
            delta[row + v] = d;
            sigma[row + v] = sigma[row + v - 1] + d;
            previous += d;
            j.set(b, v, previous);
            mu.set(b, v, a);
        }
    }
    let stats = SolveStats {
        evaluations: jobs * max_value * model.num_actions(),
        iterations: 1,
        ..SolveStats::default()
    };
    SolutionTable {
        j,
        mu,
        delta,
        sigma,
        solver: SolverKind::Recursive,
        stats,
    }
}

/// Order in which value iteration visits the nonterminal states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// `b` ascending, then `v` ascending. Converges in one sweep.
    #[default]
    Topological,
    /// `b` descending, then `v` descending. Needs up to `B * V` sweeps.
    Reverse,
}

impl SweepOrder {
    fn states(self, jobs: usize, max_value: usize) -> Vec<(usize, usize)> {
        let mut states: Vec<_> = (1..=jobs).flat_map(|b| (1..=max_value).map(move |v| (b, v))).collect();
        if self == SweepOrder::Reverse {
            states.reverse();
        }
        states
    }
}

/// Default value-iteration tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default sweep budget for a model: `B * V + 1`.
pub fn default_max_sweeps(model: &ValidatedModel) -> usize {
    model.num_states() + 1
}

/// Value iteration from `J = 0` with the topological sweep order.
pub fn value_iteration(model: &ValidatedModel, tol: f64, max_sweeps: usize) -> Result<SolutionTable, SolverError> {
    value_iteration_ordered(model, tol, max_sweeps, SweepOrder::Topological)
}

/// Gauss-Seidel value iteration from `J = 0` in the given sweep order. Stops
/// once a sweep changes no entry by more than `tol`.
pub fn value_iteration_ordered(
    model: &ValidatedModel,
    tol: f64,
    max_sweeps: usize,
    order: SweepOrder,
) -> Result<SolutionTable, SolverError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SolverError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_sweeps == 0 {
        return Err(SolverError::InvalidArgument("max_sweeps must be at least 1".into()));
    }
    let (jobs, max_value) = (model.jobs(), model.max_value());
    let states = order.states(jobs, max_value);
    let mut j = CostTable::zeros(jobs, max_value);
    let mut stats = SolveStats::default();
    loop {
        stats.iterations += 1;
        let mut residual: f64 = 0.0;
        for &(b, v) in &states {
            let (value, _) = bellman_backup(model, &j, b, v);
            residual = residual.max((value - j.get(b, v)).abs());
            j.set(b, v, value);
        }
        stats.evaluations += states.len() * model.num_actions();
        stats.residual = residual;
        if residual <= tol {
            break;
        }
        if stats.iterations >= max_sweeps {
            return Err(SolverError::NotConverged {
                sweeps: stats.iterations,
                residual,
            });
        }
    }
    let mu = greedy_policy(model, &j);
    stats.evaluations += states.len() * model.num_actions();
    Ok(SolutionTable::from_cost(j, mu, SolverKind::ValueIteration, stats))
}

fn greedy_policy(model: &ValidatedModel, j: &CostTable) -> PolicyTable {
    PolicyTable::from_fn(model.jobs(), model.max_value(), |b, v| bellman_backup(model, j, b, v).1)
}

/// Exact cost-to-go of a stationary policy, by one backward pass over the
/// transition graph.
pub fn evaluate_policy(model: &ValidatedModel, policy: &PolicyTable) -> Result<CostTable, SolverError> {
    policy.check(model)?;
    let mut j = CostTable::zeros(model.jobs(), model.max_value());
    for b in 1..=model.jobs() {
        for v in 1..=model.max_value() {
            let value = objective(model, &j, b, v, policy.get(b, v));
            j.set(b, v, value);
        }
    }
    Ok(j)
}

/// Policy iteration from the all-lowest-action policy.
pub fn policy_iteration(model: &ValidatedModel) -> SolutionTable {
    let (jobs, max_value) = (model.jobs(), model.max_value());
    let mut policy = PolicyTable::constant(jobs, max_value, 0);
    let mut stats = SolveStats::default();
    loop {
        let j = evaluate_policy(model, &policy).expect("policy built for this model");
        stats.iterations += 1;
        stats.evaluations += model.num_states();
        let improved = greedy_policy(model, &j);
        stats.evaluations += model.num_states() * model.num_actions();
        if improved == policy {
            return SolutionTable::from_cost(j, policy, SolverKind::PolicyIteration, stats);
        }
        stats.improvements += 1;
        policy = improved;
    }
}

/// Dispatches on `kind` with default value-iteration settings, except `tol`.
pub fn solve(model: &ValidatedModel, kind: SolverKind, tol: f64) -> Result<SolutionTable, SolverError> {
    match kind {
        SolverKind::Recursive => Ok(solve_recursive(model)),
        SolverKind::ValueIteration => value_iteration(model, tol, default_max_sweeps(model)),
        SolverKind::PolicyIteration => Ok(policy_iteration(model)),
    }
}

/// A state where the runner-up action comes within a small window of the
/// chosen one.
#[derive(Debug, Clone, PartialEq)]
pub struct NearTie {
    pub state: State,
    pub chosen: usize,
    pub rival: usize,
    /// `objective(rival) - objective(chosen)`, which is `>= 0`.
    pub gap: f64,
}

/// Lists states whose policy choice hinges on a difference of at most
/// `window` in the linearized objective `c(s) - s (r(v) + sigma(b, v - 1))`.
pub fn near_ties(model: &ValidatedModel, solution: &SolutionTable, window: f64) -> Vec<NearTie> {
    let mut ties = Vec::new();
    for b in 1..=model.jobs() {
        for v in 1..=model.max_value() {
            let x = model.reward(v) + solution.sigma(b, v - 1);
            let chosen = solution.mu(b, v);
            let best = model.service_cost(chosen) - model.action(chosen) * x;
            for rival in (0..model.num_actions()).filter(|&a| a != chosen) {
                let gap = model.service_cost(rival) - model.action(rival) * x - best;
                if gap.abs() <= window {
                    ties.push(NearTie {
                        state: State::new(b, v),
                        chosen,
                        rival,
                        gap,
                    });
                }
            }
        }
    }
    ties
}
