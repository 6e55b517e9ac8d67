//! The four reference instances and their expected policy regimes.
//!
//! All share `h(b) = b`, `c(s) = 5 ln(1 / (1 - s))`, `V = 10` and `B = 20`;
//! they differ in the reward and the action set.

use crate::model::{ActionSet, CostSpec, ModelConfig};
use crate::monotone::{InJobsVerdict, MonotonicityReport, RowShape};
use crate::solver::SolutionTable;
use serde::Serialize;

/// Qualitative claim about `v -> mu(b, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InValueRegime {
    /// Non-decreasing for every `b` ("giving up" as the value decays).
    NonDecreasingForAll,
    /// Non-increasing for every `b` ("trying harder" as the value decays).
    NonIncreasingForAll,
    /// Some rows go up, others go down.
    VariesWithJobs,
    /// The given row is monotone in neither direction.
    MixedRow(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub config: ModelConfig,
    /// Every preset expects `b -> mu(b, v)` non-decreasing for all `v`.
    pub in_value: InValueRegime,
}

/// One regime claim and whether a solution satisfies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub claim: String,
    pub passed: bool,
}

fn preset(id: &'static str, actions: [f64; 3], reward: CostSpec, in_value: InValueRegime) -> FigurePreset {
    FigurePreset {
        id,
        config: ModelConfig {
            jobs: 20,
            initial_value: 10,
            actions: ActionSet::new(actions.to_vec()).expect("preset actions are valid"),
            holding: CostSpec::Linear(1.0),
            service_cost: CostSpec::LogBarrier(5.0),
            reward,
        },
        in_value,
    }
}

pub fn presets() -> Vec<FigurePreset> {
    vec![
        preset(
            "1a",
            [0.1, 0.5, 0.9],
            CostSpec::Affine(1.0, 0.0),
            InValueRegime::NonDecreasingForAll,
        ),
        preset(
            "1b",
            [0.6, 0.7, 0.8],
            CostSpec::Affine(0.1, 25.0),
            InValueRegime::NonIncreasingForAll,
        ),
        preset(
            "1c",
            [0.6, 0.7, 0.9],
            CostSpec::Affine(0.1, 20.0),
            InValueRegime::VariesWithJobs,
        ),
        preset(
            "1d",
            [0.700, 0.705, 0.710],
            CostSpec::Log(5.0),
            InValueRegime::MixedRow(5),
        ),
    ]
}

pub fn preset_by_id(id: &str) -> Option<FigurePreset> {
    presets().into_iter().find(|p| p.id == id)
}

impl FigurePreset {
    /// Evaluates the preset's claims against a classification report.
    /// Constant rows count toward either direction.
    pub fn check(&self, report: &MonotonicityReport) -> Vec<ClaimOutcome> {
        let in_b = ClaimOutcome {
            claim: "in-b NonDecreasing for all v".into(),
            passed: report.in_b_verdict == InJobsVerdict::NonDecreasing,
        };
        let in_v = match self.in_value {
            InValueRegime::NonDecreasingForAll => ClaimOutcome {
                claim: "in-v NonDecreasing for all b".into(),
                passed: report.all_rows_non_decreasing(),
            },
            InValueRegime::NonIncreasingForAll => ClaimOutcome {
                claim: "in-v NonIncreasing for all b".into(),
                passed: report.all_rows_non_increasing(),
            },
            InValueRegime::VariesWithJobs => ClaimOutcome {
                claim: "in-v direction varies with b".into(),
                passed: report.direction_varies_with_b(),
            },
            InValueRegime::MixedRow(b) => ClaimOutcome {
                claim: format!("in-v Mixed at b = {b}"),
                passed: matches!(report.per_b_in_v.get(&b), Some(RowShape::Mixed(_))),
            },
        };
        vec![in_b, in_v]
    }
}

/// Cells where the policy changes between neighbours: the segmentation lines
/// of a policy plot. CSV header `b,v,neighbor_b,neighbor_v,mu_index,neighbor_mu_index`,
/// with the neighbour either one value step (`v + 1`) or one job (`b + 1`)
/// above.
pub fn boundary_csv(solution: &SolutionTable) -> String {
    let mut out = String::from("b,v,neighbor_b,neighbor_v,mu_index,neighbor_mu_index\n");
    let (jobs, max_value) = (solution.jobs(), solution.max_value());
    for b in 1..=jobs {
        for v in 1..=max_value {
            let here = solution.mu(b, v);
            if v < max_value && solution.mu(b, v + 1) != here {
                out.push_str(&format!("{b},{v},{b},{},{here},{}\n", v + 1, solution.mu(b, v + 1)));
            }
            if b < jobs && solution.mu(b + 1, v) != here {
                out.push_str(&format!("{b},{v},{},{v},{here},{}\n", b + 1, solution.mu(b + 1, v)));
            }
        }
    }
    out
}
