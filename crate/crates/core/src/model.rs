//! Problem instances: job count, initial value, the finite action set and
//! the three cost/reward functions.
//!
//! A [`ModelConfig`] is what users write down (usually as JSON). Passing it
//! through [`validate`] materializes every function into a lookup table and
//! records which of the standing monotonicity assumptions the tables satisfy.
//! Downstream code only ever sees a [`ValidatedModel`].

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors raised while reading or validating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// The document is not well-formed JSON.
    #[error("malformed configuration: {0}")]
    Parse(String),
    /// A field is missing, unexpected, has the wrong type or shape.
    #[error("schema error in `{field}`: {reason}")]
    Schema { field: String, reason: String },
    /// A value is well-typed but out of its admissible range.
    #[error("range error in `{field}`: {reason}")]
    Range { field: String, reason: String },
}

impl ModelError {
    fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ModelError::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    fn range(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ModelError::Range {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Name of the offending field, when the error is attributable to one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ModelError::Parse(_) => None,
            ModelError::Schema { field, .. } | ModelError::Range { field, .. } => Some(field),
        }
    }
}

/// A point of the state space: `jobs` remaining and the residual value of
/// the head-of-line job.
///
/// The only state with `jobs == 0` is the terminal state `(0, V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State {
    pub jobs: usize,
    pub value: usize,
}

impl State {
    pub const fn new(jobs: usize, value: usize) -> Self {
        State { jobs, value }
    }

    /// The cost-free trapping state `(0, V)`.
    pub const fn terminal(max_value: usize) -> Self {
        State {
            jobs: 0,
            value: max_value,
        }
    }

    pub const fn is_terminal(&self) -> bool {
        self.jobs == 0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.jobs, self.value)
    }
}

/// Strictly increasing, non-empty list of service probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSet(Vec<f64>);

impl ActionSet {
    pub fn new(actions: Vec<f64>) -> Result<Self, ModelError> {
        if actions.is_empty() {
            return Err(ModelError::schema("actions", "action set must be non-empty"));
        }
        for (i, &s) in actions.iter().enumerate() {
            if !(0.0..=1.0).contains(&s) {
                return Err(ModelError::range(
                    "actions",
                    format!("actions[{i}] = {s} lies outside [0, 1]"),
                ));
            }
        }
        if let Some(i) = actions.windows(2).position(|w| w[0] >= w[1]) {
            return Err(ModelError::schema(
                "actions",
                format!(
                    "actions must be strictly increasing, but actions[{}] = {} and actions[{}] = {}",
                    i,
                    actions[i],
                    i + 1,
                    actions[i + 1]
                ),
            ));
        }
        Ok(ActionSet(actions))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.0.get(index).copied()
    }
}

impl std::ops::Index<usize> for ActionSet {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

/// A parametric (or tabulated) function family used for `h`, `c` and `r`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostSpec {
    /// Explicit values, one per domain point.
    Table(Vec<f64>),
    /// `a * x`
    Linear(f64),
    /// `a * x + b`
    Affine(f64, f64),
    /// `k`
    Constant(f64),
    /// `k * ln(1 / (1 - x))`, infinite at `x = 1`.
    LogBarrier(f64),
    /// `k * ln(1 + x)`
    Log(f64),
}

impl CostSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CostSpec::Table(_) => "table",
            CostSpec::Linear(_) => "linear",
            CostSpec::Affine(..) => "affine",
            CostSpec::Constant(_) => "constant",
            CostSpec::LogBarrier(_) => "log_barrier",
            CostSpec::Log(_) => "log",
        }
    }

    /// Evaluates a parametric family at `x`. Tables have no closed form and
    /// return `None`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        match *self {
            CostSpec::Table(_) => None,
            CostSpec::Linear(a) => Some(a * x),
            CostSpec::Affine(a, b) => Some(a * x + b),
            CostSpec::Constant(k) => Some(k),
            CostSpec::LogBarrier(k) => Some(k * (1.0 / (1.0 - x)).ln()),
            CostSpec::Log(k) => Some(k * (1.0 + x).ln()),
        }
    }

    fn from_raw(field: &str, raw: RawSpec) -> Result<Self, ModelError> {
        let RawSpec { kind, params, values } = raw;
        if kind == "table" {
            if params.is_some() {
                return Err(ModelError::schema(field, "kind `table` takes `values`, not `params`"));
            }
            let values = values.ok_or_else(|| ModelError::schema(field, "kind `table` requires `values`"))?;
            if values.is_empty() {
                return Err(ModelError::schema(field, "table must have at least one value"));
            }
            return Ok(CostSpec::Table(values));
        }
        if values.is_some() {
            return Err(ModelError::schema(
                field,
                format!("kind `{kind}` takes `params`, not `values`"),
            ));
        }
        let params = params.ok_or_else(|| ModelError::schema(field, format!("kind `{kind}` requires `params`")))?;
        let arity = match kind.as_str() {
            "linear" | "constant" | "log_barrier" | "log" => 1,
            "affine" => 2,
            other => return Err(ModelError::schema(field, format!("unknown kind `{other}`"))),
        };
        if params.len() != arity {
            return Err(ModelError::schema(
                field,
                format!("kind `{kind}` takes {arity} parameter(s), got {}", params.len()),
            ));
        }
        Ok(match kind.as_str() {
            "linear" => CostSpec::Linear(params[0]),
            "constant" => CostSpec::Constant(params[0]),
            "log_barrier" => CostSpec::LogBarrier(params[0]),
            "log" => CostSpec::Log(params[0]),
            _ => CostSpec::Affine(params[0], params[1]),
        })
    }

    fn to_raw(&self) -> RawSpec {
        let (params, values) = match self {
            CostSpec::Table(v) => (None, Some(v.clone())),
            CostSpec::Linear(a) | CostSpec::Constant(a) | CostSpec::LogBarrier(a) | CostSpec::Log(a) => {
                (Some(vec![*a]), None)
            }
            CostSpec::Affine(a, b) => (Some(vec![*a, *b]), None),
        };
        RawSpec {
            kind: self.kind().to_string(),
            params,
            values,
        }
    }
}

/// What a [`CostSpec`] is evaluated over.
#[derive(Debug, Clone, Copy)]
pub enum Domain<'a> {
    /// Job counts `1..=n`.
    Jobs(usize),
    /// Residual values `1..=n`.
    Values(usize),
    /// The service probabilities of an action set.
    Actions(&'a ActionSet),
}

impl Domain<'_> {
    fn len(&self) -> usize {
        match *self {
            Domain::Jobs(n) | Domain::Values(n) => n,
            Domain::Actions(a) => a.len(),
        }
    }

    fn point(&self, i: usize) -> f64 {
        match *self {
            Domain::Jobs(_) | Domain::Values(_) => (i + 1) as f64,
            Domain::Actions(a) => a[i],
        }
    }
}

/// Evaluates `spec` at every point of `domain`.
///
/// Entry `i` holds the value at argument `i + 1` for job and value domains,
/// and at `actions[i]` for an action domain. Any non-finite evaluation is a
/// range error; `field` names the offending configuration key.
pub fn materialize(spec: &CostSpec, domain: Domain<'_>, field: &str) -> Result<Vec<f64>, ModelError> {
    let n = domain.len();
    if n == 0 {
        return Err(ModelError::range(field, "domain must contain at least one point"));
    }
    let values = match spec {
        CostSpec::Table(values) => {
            if values.len() != n {
                return Err(ModelError::range(
                    field,
                    format!("table has {} values but the domain has {n} points", values.len()),
                ));
            }
            values.clone()
        }
        family => (0..n)
            .map(|i| family.eval(domain.point(i)).expect("parametric family"))
            .collect(),
    };
    if let Some(i) = values.iter().position(|x| !x.is_finite()) {
        return Err(ModelError::range(
            field,
            format!(
                "{} evaluates to {} at argument {}",
                spec.kind(),
                values[i],
                domain.point(i)
            ),
        ));
    }
    Ok(values)
}

/// An unvalidated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    /// Initial number of jobs `B`.
    pub jobs: usize,
    /// Value `V` of a job when it first reaches the head of the line.
    pub initial_value: usize,
    pub actions: ActionSet,
    /// Holding cost `h(b)`.
    pub holding: CostSpec,
    /// Service cost `c(s)`.
    pub service_cost: CostSpec,
    /// Completion reward `r(v)`.
    pub reward: CostSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "B")]
    jobs: i64,
    #[serde(rename = "V")]
    initial_value: i64,
    actions: Vec<f64>,
    holding: RawSpec,
    service_cost: RawSpec,
    reward: RawSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

/// Parses a JSON configuration document.
///
/// ```
/// use decayqueue::model::{load_config, CostSpec};
///
/// let config = load_config(r#"{
///     "B": 20, "V": 10, "actions": [0.1, 0.5, 0.9],
///     "holding": {"kind": "linear", "params": [1]},
///     "service_cost": {"kind": "log_barrier", "params": [5]},
///     "reward": {"kind": "affine", "params": [1, 0]}
/// }"#).unwrap();
/// assert_eq!(config.jobs, 20);
/// assert_eq!(config.reward, CostSpec::Affine(1.0, 0.0));
/// ```
pub fn load_config(text: &str) -> Result<ModelConfig, ModelError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            ModelError::schema("document", e.to_string())
        } else {
            ModelError::Parse(e.to_string())
        }
    })?;
    let positive = |field: &str, x: i64| {
        usize::try_from(x)
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| ModelError::range(field, format!("must be a positive integer, got {x}")))
    };
    Ok(ModelConfig {
        jobs: positive("B", raw.jobs)?,
        initial_value: positive("V", raw.initial_value)?,
        actions: ActionSet::new(raw.actions)?,
        holding: CostSpec::from_raw("holding", raw.holding)?,
        service_cost: CostSpec::from_raw("service_cost", raw.service_cost)?,
        reward: CostSpec::from_raw("reward", raw.reward)?,
    })
}

impl ModelConfig {
    /// Serializes back to the configuration schema accepted by [`load_config`].
    pub fn to_json(&self) -> String {
        let raw = RawConfig {
            jobs: self.jobs as i64,
            initial_value: self.initial_value as i64,
            actions: self.actions.as_slice().to_vec(),
            holding: self.holding.to_raw(),
            service_cost: self.service_cost.to_raw(),
            reward: self.reward.to_raw(),
        };
        serde_json::to_string_pretty(&raw).expect("config serializes")
    }
}

/// Which of the standing assumptions on `h`, `c` and `r` hold.
///
/// Solvers never need these. The structural guarantees do: the in-`b`
/// monotonicity of the optimal policy needs `h_nondecreasing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssumptionFlags {
    pub h_nondecreasing: bool,
    pub c_nondecreasing: bool,
    pub r_nondecreasing: bool,
    pub r_positive: bool,
}

fn nondecreasing(table: &[f64]) -> bool {
    table.windows(2).all(|w| w[0] <= w[1])
}

/// A validated, immutable problem instance with every function tabulated.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedModel {
    config: ModelConfig,
    h_table: Vec<f64>,
    c_table: Vec<f64>,
    r_table: Vec<f64>,
    flags: AssumptionFlags,
}

/// Materializes the cost tables of `config` and computes its assumption flags.
///
/// Non-monotone tables are accepted (and flagged). Non-finite values, negative
/// holding or service costs and non-positive rewards are rejected.
pub fn validate(config: ModelConfig) -> Result<ValidatedModel, ModelError> {
    if config.jobs == 0 {
        return Err(ModelError::range("B", "must be at least 1"));
    }
    if config.initial_value == 0 {
        return Err(ModelError::range("V", "must be at least 1"));
    }
    let h_table = materialize(&config.holding, Domain::Jobs(config.jobs), "holding")?;
    let c_table = materialize(&config.service_cost, Domain::Actions(&config.actions), "service_cost")?;
    let r_table = materialize(&config.reward, Domain::Values(config.initial_value), "reward")?;

    for (field, table) in [("holding", &h_table), ("service_cost", &c_table)] {
        if let Some(i) = table.iter().position(|&x| x < 0.0) {
            return Err(ModelError::range(
                field,
                format!("entry {i} is {}, costs must be non-negative", table[i]),
            ));
        }
    }
    if let Some(i) = r_table.iter().position(|&x| x <= 0.0) {
        return Err(ModelError::range(
            "reward",
            format!("r({}) = {}, rewards must be strictly positive", i + 1, r_table[i]),
        ));
    }

    let flags = AssumptionFlags {
        h_nondecreasing: nondecreasing(&h_table),
        c_nondecreasing: nondecreasing(&c_table),
        r_nondecreasing: nondecreasing(&r_table),
        r_positive: r_table.iter().all(|&x| x > 0.0),
    };
    Ok(ValidatedModel {
        config,
        h_table,
        c_table,
        r_table,
        flags,
    })
}

impl ValidatedModel {
    /// Builds a model directly from tables: `holding[b - 1] = h(b)`,
    /// `service_cost[i] = c(actions[i])`, `reward[v - 1] = r(v)`.
    pub fn from_tables(
        holding: Vec<f64>,
        actions: Vec<f64>,
        service_cost: Vec<f64>,
        reward: Vec<f64>,
    ) -> Result<Self, ModelError> {
        validate(ModelConfig {
            jobs: holding.len(),
            initial_value: reward.len(),
            actions: ActionSet::new(actions)?,
            holding: CostSpec::Table(holding),
            service_cost: CostSpec::Table(service_cost),
            reward: CostSpec::Table(reward),
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    /// `B`
    pub fn jobs(&self) -> usize {
        self.config.jobs
    }

    /// `V`
    pub fn max_value(&self) -> usize {
        self.config.initial_value
    }

    pub fn actions(&self) -> &ActionSet {
        &self.config.actions
    }

    pub fn num_actions(&self) -> usize {
        self.config.actions.len()
    }

    /// Service probability of action `index`.
    pub fn action(&self, index: usize) -> f64 {
        self.config.actions[index]
    }

    /// `h(b)` for `1 <= b <= B`.
    pub fn holding(&self, b: usize) -> f64 {
        self.h_table[b - 1]
    }

    /// `c(s)` for the action with the given index.
    pub fn service_cost(&self, index: usize) -> f64 {
        self.c_table[index]
    }

    /// `r(v)` for `1 <= v <= V`.
    pub fn reward(&self, v: usize) -> f64 {
        self.r_table[v - 1]
    }

    pub fn holding_table(&self) -> &[f64] {
        &self.h_table
    }

    pub fn service_cost_table(&self) -> &[f64] {
        &self.c_table
    }

    pub fn reward_table(&self) -> &[f64] {
        &self.r_table
    }

    pub fn flags(&self) -> AssumptionFlags {
        self.flags
    }

    /// The common reward value when `r` is constant over `1..=V`.
    pub fn constant_reward(&self) -> Option<f64> {
        let first = self.r_table[0];
        self.r_table.iter().all(|&r| r == first).then_some(first)
    }

    /// The initial state `(B, V)`.
    pub fn initial_state(&self) -> State {
        State::new(self.jobs(), self.max_value())
    }

    /// Whether `state` belongs to the state space of this model.
    pub fn contains(&self, state: State) -> bool {
        if state.jobs == 0 {
            state.value == self.max_value()
        } else {
            state.jobs <= self.jobs() && (1..=self.max_value()).contains(&state.value)
        }
    }

    /// Number of nonterminal states, `B * V`.
    pub fn num_states(&self) -> usize {
        self.jobs() * self.max_value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_1a_text() -> &'static str {
        r#"{"B":20,"V":10,"actions":[0.1,0.5,0.9],
            "holding":{"kind":"linear","params":[1]},
            "service_cost":{"kind":"log_barrier","params":[5]},
            "reward":{"kind":"affine","params":[1,0]}}"#
    }

    #[test]
    fn loads_fig_1a_document() {
        let config = load_config(fig_1a_text()).unwrap();
        assert_eq!(config.jobs, 20);
        assert_eq!(config.initial_value, 10);
        assert_eq!(config.actions.as_slice(), &[0.1, 0.5, 0.9]);
        assert_eq!(config.holding, CostSpec::Linear(1.0));
        assert_eq!(config.service_cost, CostSpec::LogBarrier(5.0));
        assert_eq!(config.reward, CostSpec::Affine(1.0, 0.0));
    }

    #[test]
    fn config_json_round_trips() {
        let config = load_config(fig_1a_text()).unwrap();
        assert_eq!(load_config(&config.to_json()).unwrap(), config);
    }

    #[test]
    fn duplicate_actions_are_a_schema_error() {
        let text = fig_1a_text().replace("[0.1,0.5,0.9]", "[0.5,0.5]");
        assert!(matches!(load_config(&text), Err(ModelError::Schema { field, .. }) if field == "actions"));
    }

    #[test]
    fn action_outside_unit_interval_is_a_range_error() {
        let text = fig_1a_text().replace("[0.1,0.5,0.9]", "[0.1,1.5]");
        assert!(matches!(load_config(&text), Err(ModelError::Range { .. })));
    }

    #[test]
    fn certain_service_with_log_barrier_fails_at_materialization() {
        let text = fig_1a_text().replace("[0.1,0.5,0.9]", "[1.0]");
        let config = load_config(&text).unwrap();
        let err = validate(config).unwrap_err();
        assert!(
            matches!(&err, ModelError::Range { field, .. } if field == "service_cost"),
            "{err}"
        );
    }

    #[test]
    fn malformed_and_schema_errors_are_distinguished() {
        assert!(matches!(load_config("{\"B\": 3"), Err(ModelError::Parse(_))));
        let extra = fig_1a_text().replacen('{', "{\"extra\": 1,", 1);
        assert!(matches!(load_config(&extra), Err(ModelError::Schema { .. })));
        let missing = fig_1a_text().replace("\"B\":20,", "");
        assert!(matches!(load_config(&missing), Err(ModelError::Schema { .. })));
        let wrong_type = fig_1a_text().replace("\"B\":20", "\"B\":\"20\"");
        assert!(matches!(load_config(&wrong_type), Err(ModelError::Schema { .. })));
        let unknown_kind = fig_1a_text().replace("\"linear\"", "\"cubic\"");
        assert!(matches!(load_config(&unknown_kind), Err(ModelError::Schema { field, .. }) if field == "holding"));
        let bad_arity = fig_1a_text().replace("[1,0]", "[1]");
        assert!(matches!(load_config(&bad_arity), Err(ModelError::Schema { field, .. }) if field == "reward"));
    }

    #[test]
    fn non_positive_counts_are_range_errors() {
        let text = fig_1a_text().replace("\"B\":20", "\"B\":0");
        assert!(matches!(load_config(&text), Err(ModelError::Range { field, .. }) if field == "B"));
        let text = fig_1a_text().replace("\"V\":10", "\"V\":-2");
        assert!(matches!(load_config(&text), Err(ModelError::Range { field, .. }) if field == "V"));
    }

    #[test]
    fn fig_1b_satisfies_all_assumptions() {
        let config = ModelConfig {
            jobs: 20,
            initial_value: 10,
            actions: ActionSet::new(vec![0.6, 0.7, 0.8]).unwrap(),
            holding: CostSpec::Linear(1.0),
            service_cost: CostSpec::LogBarrier(5.0),
            reward: CostSpec::Affine(0.1, 25.0),
        };
        let model = validate(config).unwrap();
        assert_eq!(
            model.flags(),
            AssumptionFlags {
                h_nondecreasing: true,
                c_nondecreasing: true,
                r_nondecreasing: true,
                r_positive: true,
            }
        );
    }

    #[test]
    fn decreasing_holding_table_is_flagged_not_rejected() {
        let model = ValidatedModel::from_tables(vec![3.0, 2.0, 1.0], vec![0.5], vec![1.0], vec![1.0]).unwrap();
        assert!(!model.flags().h_nondecreasing);
        assert!(model.flags().r_nondecreasing);
    }

    #[test]
    fn zero_reward_is_rejected() {
        let config = ModelConfig {
            jobs: 2,
            initial_value: 2,
            actions: ActionSet::new(vec![0.5]).unwrap(),
            holding: CostSpec::Linear(1.0),
            service_cost: CostSpec::Constant(0.0),
            reward: CostSpec::Constant(0.0),
        };
        assert!(matches!(validate(config), Err(ModelError::Range { field, .. }) if field == "reward"));
    }

    #[test]
    fn negative_costs_are_rejected() {
        let err = ValidatedModel::from_tables(vec![-1.0], vec![0.5], vec![0.0], vec![1.0]).unwrap_err();
        assert_eq!(err.field(), Some("holding"));
    }

    #[test]
    fn table_length_must_match_domain() {
        let err = validate(ModelConfig {
            jobs: 3,
            initial_value: 1,
            actions: ActionSet::new(vec![0.5]).unwrap(),
            holding: CostSpec::Table(vec![1.0, 2.0]),
            service_cost: CostSpec::Constant(0.0),
            reward: CostSpec::Constant(1.0),
        })
        .unwrap_err();
        assert_eq!(err.field(), Some("holding"));
    }

    #[test]
    fn materializes_log_barrier_over_actions() {
        let actions = ActionSet::new(vec![0.1, 0.5, 0.9]).unwrap();
        let c = materialize(&CostSpec::LogBarrier(5.0), Domain::Actions(&actions), "c").unwrap();
        let expected = [5.0 * (10.0f64 / 9.0).ln(), 5.0 * 2.0f64.ln(), 5.0 * 10.0f64.ln()];
        for (got, want) in c.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn materializes_constant_and_log_families() {
        assert_eq!(
            materialize(&CostSpec::Constant(7.0), Domain::Values(4), "r").unwrap(),
            vec![7.0; 4]
        );
        let r = materialize(&CostSpec::Log(5.0), Domain::Values(2), "r").unwrap();
        assert!((r[0] - 5.0 * 2.0f64.ln()).abs() < 1e-12);
        assert!((r[1] - 5.0 * 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn certain_service_is_legal_with_a_finite_table() {
        let model = ValidatedModel::from_tables(vec![1.0], vec![0.0, 1.0], vec![0.0, 1.0], vec![2.0]).unwrap();
        assert_eq!(model.action(1), 1.0);
    }

    #[test]
    fn state_space_membership() {
        let model = ValidatedModel::from_tables(vec![1.0, 1.0], vec![0.5], vec![0.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(model.contains(State::terminal(3)));
        assert!(!model.contains(State::new(0, 1)));
        assert!(model.contains(State::new(2, 1)));
        assert!(!model.contains(State::new(3, 1)));
        assert!(!model.contains(State::new(1, 0)));
        assert_eq!(model.initial_state(), State::new(2, 3));
    }
}
