//! The diagnosis data model: system descriptions with abnormal selectors,
//! observations, consistency checks over a single system copy, explanation
//! extraction, aggregated formulas and exhaustive reference oracles.

mod aggregate;
mod checker;
pub mod oracle;
mod system;

use thiserror::Error;

pub use aggregate::{aggregate_size, build_aggregate, AggregateLayout};
pub use checker::ConsistencyChecker;
pub use system::{
    ComponentId, ComponentSet, Diagnosis, Explanation, Family, Observation, SystemBuilder, SystemDescription,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MbdError {
    #[error("observation {obs} mentions variable {var}, which is not a system variable")]
    UnknownVariable { obs: u32, var: u32 },
    #[error("observation {obs} assigns variable {var} both ways")]
    ContradictoryObservation { obs: u32, var: u32 },
    #[error("unknown component {0}")]
    UnknownComponent(u32),
    #[error("unknown observation {0}")]
    UnknownObservation(u32),
    #[error("candidate is consistent with observation {obs}; no explanation to extract")]
    ConsistentCandidate { obs: u32 },
    #[error("{components} components exceed the brute-force cap of {cap}")]
    CapExceeded { components: usize, cap: usize },
    #[error("time budget exhausted")]
    Interrupted,
}
