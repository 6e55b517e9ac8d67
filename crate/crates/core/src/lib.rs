//! Optimal service-rate control for a single server working through a fixed
//! batch of jobs whose value decays while they are in service.
//!
//! * [`model`]: problem instances, cost tables and assumption flags.
//! * [`solver`]: cost-to-go and optimal policy by three independent methods,
//!   plus the increment tables and the monotone action selector.
//! * [`monotone`]: structural verdicts on computed policies.
//! * [`sim`]: seeded Monte Carlo simulation of the queue.
//! * [`cli`]: the `decayqueue` command-line tool.
//!
//! The guide under `book/` walks through the model and its structure; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod cli;
pub mod model;
pub mod monotone;
pub mod sim;
pub mod solver;

pub use model::{load_config, validate, ModelConfig, ModelError, State, ValidatedModel};
pub use solver::{policy_iteration, solve_recursive, value_iteration, SolutionTable, SolverKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
