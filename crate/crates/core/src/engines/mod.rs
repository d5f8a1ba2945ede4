//! End-to-end diagnosis strategies over multiple observations: implicit hitting-set
//! dualization, separate per-observation enumeration with posterior assemblage, and
//! enumeration over the aggregated formula.

mod aggregated;
mod ihsd;
mod separate;

use std::time::{Duration, Instant};

pub use aggregated::aggregated_enumerate;
pub use ihsd::{ihsd_enumerate, IhsdReport};
pub use separate::{assemble, assemble_until, separate_enumerate, ObservationDiagnoses, SeparateReport};

use crate::hitting_set::Minimality;
use crate::par::Execution;
use crate::sat::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Every diagnosis was produced.
    Complete,
    /// Stopped after the requested number of diagnoses.
    LimitReached,
    /// Time or explanation budget ran out; the output may be partial.
    BudgetExhausted,
    /// Some observation cannot be fixed by any set of abnormal components.
    NoDiagnosis,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Complete | Outcome::LimitReached => 0,
            Outcome::BudgetExhausted => 10,
            Outcome::NoDiagnosis => 20,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Complete => "complete",
            Outcome::LimitReached => "limit",
            Outcome::BudgetExhausted => "budget",
            Outcome::NoDiagnosis => "no-diagnosis",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub mode: Minimality,
    /// Stop after this many diagnoses; must be at least 1 when set.
    pub max_diagnoses: Option<usize>,
    pub time_budget: Option<Duration>,
    pub seed: u64,
    /// Give up once this many explanations were stored. Off by default.
    pub max_explanations: Option<usize>,
    pub execution: Execution,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Minimality::Subset,
            max_diagnoses: None,
            time_budget: None,
            seed: 0,
            max_explanations: None,
            execution: Execution::default(),
        }
    }
}

impl EngineConfig {
    pub fn with_mode(mode: Minimality) -> EngineConfig {
        EngineConfig {
            mode,
            ..EngineConfig::default()
        }
    }

    fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time_budget.map(|b| start + b)
    }

    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            ..SolverConfig::default()
        }
    }

    fn limit_reached(&self, emitted: usize) -> bool {
        self.max_diagnoses.is_some_and(|k| emitted >= k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub diagnoses_emitted: usize,
    pub explanations_found: usize,
    pub sat_calls: u64,
    pub iterations: u64,
    pub elapsed_seconds: f64,
    pub outcome: Outcome,
}

impl RunStats {
    fn new() -> RunStats {
        RunStats {
            diagnoses_emitted: 0,
            explanations_found: 0,
            sat_calls: 0,
            iterations: 0,
            elapsed_seconds: 0.0,
            outcome: Outcome::Complete,
        }
    }
}
