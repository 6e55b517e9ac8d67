//! Structure of optimal policies.
//!
//! Two kinds of evidence are combined here. The empirical side scans a
//! computed `mu` table for monotonicity in `b` and in `v`. The algebraic side
//! evaluates sufficient conditions that decide the `v`-direction of a row
//! without looking at `mu` at all:
//!
//! * the increment condition compares `delta(b, v)` with `-(r(v + 1) - r(v))`
//!   for every `v < V`;
//! * for a constant reward `r(v) = r_bar`, the single number
//!   `q = h(b) + min_s { c(s) - s r_bar }` decides the direction.
//!
//! Verdicts use exact comparisons. Margins are reported next to them so that
//! callers can judge floating-point sensitivity.

use crate::model::ValidatedModel;
use crate::solver::SolutionTable;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonotoneError {
    #[error("reward is not constant: r({first}) = {a} but r({second}) = {b}")]
    NonConstantReward {
        first: usize,
        second: usize,
        a: f64,
        b: f64,
    },
    #[error("job count {0} is outside 1..={1}")]
    JobOutOfRange(usize, usize),
    #[error("the x-grid must contain at least one point")]
    EmptyGrid,
}

/// Two states of the `mu` table that witness a monotonicity violation.
/// Serialized as `[[b, v], [b', v']]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub from: (usize, usize),
    pub to: (usize, usize),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&[self.from.0, self.from.1])?;
        seq.serialize_element(&[self.to.0, self.to.1])?;
        seq.end()
    }
}

/// Direction of `b -> mu(b, v)` across all `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InJobsVerdict {
    NonDecreasing,
    /// `mu(from) > mu(to)` with `to` one job above `from`.
    Violated(Witness),
}

/// Shape of one row `v -> mu(b, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowShape {
    NonDecreasing,
    NonIncreasing,
    Constant,
    /// Both an increase and a decrease occur; the witness is the first
    /// adjacent pair that moves against the row's initial direction.
    Mixed(Witness),
}

impl RowShape {
    pub fn is_non_decreasing(&self) -> bool {
        matches!(self, RowShape::NonDecreasing | RowShape::Constant)
    }

    pub fn is_non_increasing(&self) -> bool {
        matches!(self, RowShape::NonIncreasing | RowShape::Constant)
    }
}

/// Outcome of the increment condition for one `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaVerdict {
    GuaranteedNonDecreasing,
    GuaranteedNonIncreasing,
    Inconclusive,
}

/// Outcome of the constant-reward condition for one `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstantRewardVerdict {
    GuaranteedNonDecreasing,
    GuaranteedNonIncreasing,
    /// `q == 0`: both directions hold, so the row is constant.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCheck {
    pub verdict: DeltaVerdict,
    /// `min` and `max` over `v < V` of `delta(b, v) + r(v + 1) - r(v)`;
    /// `None` when `V = 1`.
    pub margin_range: Option<(f64, f64)>,
    /// Both inequality families hold. The verdict is then
    /// `GuaranteedNonDecreasing` and the row must be constant.
    pub both_hold: bool,
}

/// Increment condition for row `b`.
///
/// Non-decreasing is guaranteed when `delta(b, v) >= -(r(v + 1) - r(v))` for
/// every `v < V`, non-increasing when `<=` holds throughout. These are
/// sufficient conditions only. When both hold (including `V = 1`, where
/// both are vacuous) the non-decreasing verdict is reported.
pub fn check_delta_conditions(
    model: &ValidatedModel,
    solution: &SolutionTable,
    b: usize,
) -> Result<DeltaCheck, MonotoneError> {
    check_job(model, b)?;
    let mut all_ge = true;
    let mut all_le = true;
    let mut margin_range: Option<(f64, f64)> = None;
    for v in 1..model.max_value() {
        let delta = solution.delta(b, v);
        let threshold = -(model.reward(v + 1) - model.reward(v));
        all_ge &= delta >= threshold;
        all_le &= delta <= threshold;
        let margin = delta + (model.reward(v + 1) - model.reward(v));
        margin_range = Some(match margin_range {
            None => (margin, margin),
            Some((lo, hi)) => (lo.min(margin), hi.max(margin)),
        });
    }
    let verdict = if all_ge {
        DeltaVerdict::GuaranteedNonDecreasing
    } else if all_le {
        DeltaVerdict::GuaranteedNonIncreasing
    } else {
        DeltaVerdict::Inconclusive
    };
    Ok(DeltaCheck {
        verdict,
        margin_range,
        both_hold: all_ge && all_le,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantRewardCheck {
    pub verdict: ConstantRewardVerdict,
    /// `h(b) + min_s { c(s) - s r_bar }`
    pub q: f64,
}

/// Constant-reward condition for row `b`. Needs no solution.
///
/// ```
/// use decayqueue::model::ValidatedModel;
/// use decayqueue::monotone::{check_constant_reward, ConstantRewardVerdict};
///
/// // h = 1, c = 0, r_bar = 0.5, actions {0, 1}: q = 1 + min(0, -0.5) = 0.5.
/// let model = ValidatedModel::from_tables(vec![1.0], vec![0.0, 1.0], vec![0.0, 0.0], vec![0.5; 3]).unwrap();
/// let check = check_constant_reward(&model, 1).unwrap();
/// assert_eq!(check.q, 0.5);
/// assert_eq!(check.verdict, ConstantRewardVerdict::GuaranteedNonDecreasing);
/// ```
pub fn check_constant_reward(model: &ValidatedModel, b: usize) -> Result<ConstantRewardCheck, MonotoneError> {
    check_job(model, b)?;
    let r_bar = match model.constant_reward() {
        Some(r) => r,
        None => {
            let r = model.reward_table();
            let i = r.iter().position(|&x| x != r[0]).expect("non-constant table");
            return Err(MonotoneError::NonConstantReward {
                first: 1,
                second: i + 1,
                a: r[0],
                b: r[i],
            });
        }
    };
    let min = (0..model.num_actions())
        .map(|a| model.service_cost(a) - model.action(a) * r_bar)
        .fold(f64::INFINITY, f64::min);
    let q = model.holding(b) + min;
    let verdict = if q > 0.0 {
        ConstantRewardVerdict::GuaranteedNonDecreasing
    } else if q < 0.0 {
        ConstantRewardVerdict::GuaranteedNonIncreasing
    } else {
        ConstantRewardVerdict::Both
    };
    Ok(ConstantRewardCheck { verdict, q })
}

fn check_job(model: &ValidatedModel, b: usize) -> Result<(), MonotoneError> {
    if (1..=model.jobs()).contains(&b) {
        Ok(())
    } else {
        Err(MonotoneError::JobOutOfRange(b, model.jobs()))
    }
}

/// Empirical and algebraic monotonicity verdicts for one solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub in_b_verdict: InJobsVerdict,
    pub per_b_in_v: BTreeMap<usize, RowShape>,
    pub theorem2_per_b: BTreeMap<usize, DeltaVerdict>,
    /// Present only when the reward is constant.
    pub theorem3_per_b: Option<BTreeMap<usize, ConstantRewardVerdict>>,
}

impl MonotonicityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Whether every row is non-decreasing in `v` (constant rows included).
    pub fn all_rows_non_decreasing(&self) -> bool {
        self.per_b_in_v.values().all(RowShape::is_non_decreasing)
    }

    pub fn all_rows_non_increasing(&self) -> bool {
        self.per_b_in_v.values().all(RowShape::is_non_increasing)
    }

    /// Rows that are not monotone in either direction.
    pub fn mixed_rows(&self) -> Vec<usize> {
        self.per_b_in_v
            .iter()
            .filter(|(_, shape)| matches!(shape, RowShape::Mixed(_)))
            .map(|(&b, _)| b)
            .collect()
    }

    /// Whether some row is strictly non-decreasing (not constant) and some
    /// other row strictly non-increasing, or some row is mixed.
    pub fn direction_varies_with_b(&self) -> bool {
        let shapes: Vec<_> = self.per_b_in_v.values().collect();
        let up = shapes.iter().any(|s| matches!(s, RowShape::NonDecreasing));
        let down = shapes.iter().any(|s| matches!(s, RowShape::NonIncreasing));
        up && down
    }

    /// Lists every algebraic guarantee that the empirical scan contradicts.
    /// Empty for a sound report.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&b, shape) in &self.per_b_in_v {
            match self.theorem2_per_b.get(&b) {
                Some(DeltaVerdict::GuaranteedNonDecreasing) if !shape.is_non_decreasing() => out.push(format!(
                    "b = {b}: increment condition guarantees non-decreasing, row is {shape:?}"
                )),
                Some(DeltaVerdict::GuaranteedNonIncreasing) if !shape.is_non_increasing() => out.push(format!(
                    "b = {b}: increment condition guarantees non-increasing, row is {shape:?}"
                )),
                _ => {}
            }
            if let Some(verdict) = self.theorem3_per_b.as_ref().and_then(|m| m.get(&b)) {
                let ok = match verdict {
                    ConstantRewardVerdict::GuaranteedNonDecreasing => shape.is_non_decreasing(),
                    ConstantRewardVerdict::GuaranteedNonIncreasing => shape.is_non_increasing(),
                    ConstantRewardVerdict::Both => *shape == RowShape::Constant,
                };
                if !ok {
                    out.push(format!(
                        "b = {b}: constant-reward condition gives {verdict:?}, row is {shape:?}"
                    ));
                }
            }
        }
        out
    }
}

/// Shape of `v -> row[v - 1]` for row `b`.
pub fn classify_row(b: usize, row: &[usize]) -> RowShape {
    let mut first_up: Option<usize> = None;
    let mut first_down: Option<usize> = None;
    for (i, w) in row.windows(2).enumerate() {
        if w[1] > w[0] && first_up.is_none() {
            first_up = Some(i);
        }
        if w[1] < w[0] && first_down.is_none() {
            first_down = Some(i);
        }
    }
    let witness = |i: usize| Witness {
        from: (b, i + 1),
        to: (b, i + 2),
    };
    match (first_up, first_down) {
        (None, None) => RowShape::Constant,
        (Some(_), None) => RowShape::NonDecreasing,
        (None, Some(_)) => RowShape::NonIncreasing,
        (Some(up), Some(down)) => RowShape::Mixed(witness(up.max(down))),
    }
}

/// Scans `mu` in both directions and fills in the algebraic verdicts.
pub fn classify_policy(model: &ValidatedModel, solution: &SolutionTable) -> MonotonicityReport {
    let (jobs, max_value) = (model.jobs(), model.max_value());

    let mut in_b_verdict = InJobsVerdict::NonDecreasing;
    'scan: for v in 1..=max_value {
        for b in 1..jobs {
            if solution.mu(b, v) > solution.mu(b + 1, v) {
                in_b_verdict = InJobsVerdict::Violated(Witness {
                    from: (b, v),
                    to: (b + 1, v),
                });
                break 'scan;
            }
        }
    }

    let per_b_in_v = (1..=jobs)
        .map(|b| {
            let row: Vec<usize> = (1..=max_value).map(|v| solution.mu(b, v)).collect();
            (b, classify_row(b, &row))
        })
        .collect();

    let theorem2_per_b = (1..=jobs)
        .map(|b| {
            (
                b,
                check_delta_conditions(model, solution, b).expect("b in range").verdict,
            )
        })
        .collect();

    let theorem3_per_b = model.constant_reward().map(|_| {
        (1..=jobs)
            .map(|b| (b, check_constant_reward(model, b).expect("constant reward").verdict))
            .collect()
    });

    MonotonicityReport {
        in_b_verdict,
        per_b_in_v,
        theorem2_per_b,
        theorem3_per_b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubmodularCheck {
    pub passed: bool,
    /// Largest value of `f(s+, x+) + f(s-, x-) - f(s+, x-) - f(s-, x+)` over
    /// all `s- < s+` and `x- < x+`, or 0 when there is no such quadruple.
    pub worst_margin: f64,
}

/// Slack allowed in the submodularity inequality for rounding.
pub const SUBMODULAR_SLACK: f64 = 1e-12;

/// Checks that `f(s, x) = c(s) - s x` is submodular over the action set and
/// the given grid.
pub fn check_submodular(model: &ValidatedModel, x_grid: &[f64]) -> Result<SubmodularCheck, MonotoneError> {
    if x_grid.is_empty() {
        return Err(MonotoneError::EmptyGrid);
    }
    let mut xs = x_grid.to_vec();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let f = |a: usize, x: f64| model.service_cost(a) - model.action(a) * x;
    let mut worst: Option<f64> = None;
    for lo in 0..model.num_actions() {
        for hi in lo + 1..model.num_actions() {
            for (i, &x_lo) in xs.iter().enumerate() {
                for &x_hi in &xs[i + 1..] {
                    let margin = f(hi, x_hi) + f(lo, x_lo) - f(hi, x_lo) - f(lo, x_hi);
                    worst = Some(worst.map_or(margin, |w: f64| w.max(margin)));
                }
            }
        }
    }
    let worst_margin = worst.unwrap_or(0.0);
    Ok(SubmodularCheck {
        passed: worst_margin <= SUBMODULAR_SLACK,
        worst_margin,
    })
}
