use std::time::Instant;

use crate::card::AtMost;
use crate::formula::Lit;
use crate::hitting_set::Minimality;
use crate::mbd::{build_aggregate, AggregateLayout, ComponentId, Diagnosis, MbdError, Observation, SystemDescription};
use crate::mcs::McsSolver;
use crate::sat::{Solver, Status};

use super::{EngineConfig, Outcome, RunStats};

/// Enumerates diagnoses over one formula holding a renamed system replica per
/// observation with shared abnormal selectors. Subset mode enumerates the minimal
/// correction subsets of the `¬Ab(c)` soft units; cardinality mode raises an
/// at-most bound on the abnormal selectors and blocks each optimum found.
pub fn aggregated_enumerate(
    sd: &SystemDescription,
    observations: &[Observation],
    config: &EngineConfig,
    mut sink: impl FnMut(&Diagnosis),
) -> Result<RunStats, MbdError> {
    let start = Instant::now();
    for o in observations {
        sd.check_observation(o)?;
    }
    let deadline = config.deadline(start);
    let instance = build_aggregate(sd, observations);
    let solver = Solver::with_config(config.solver_config());
    let mut stats = RunStats::new();

    match config.mode {
        Minimality::Subset => {
            let mut mcs = McsSolver::with_solver(solver, &instance);
            let summary = mcs.enumerate(config.max_diagnoses, deadline, |res| {
                let d: Diagnosis = res.mcs.iter().map(|&i| ComponentId::new(i as u32 + 1)).collect();
                sink(&d);
                true
            });
            stats.diagnoses_emitted = summary.count;
            stats.iterations = summary.count as u64 + 1;
            stats.sat_calls = mcs.sat_calls();
            stats.outcome = if summary.interrupted {
                Outcome::BudgetExhausted
            } else if summary.exhausted {
                if summary.count == 0 {
                    Outcome::NoDiagnosis
                } else {
                    Outcome::Complete
                }
            } else {
                Outcome::LimitReached
            };
        }
        Minimality::Cardinality => {
            let mut solver = solver;
            solver.ensure_vars(instance.num_vars());
            for c in instance.hard.clauses() {
                solver.add(c);
            }
            let layout = AggregateLayout::new(sd);
            let abnormal: Vec<Lit> = sd.components().map(|c| layout.ab_var(c).pos()).collect();
            stats.outcome = cardinality_loop(&mut solver, abnormal, config, deadline, &mut stats, &mut sink);
            stats.sat_calls = stats.iterations;
        }
    }
    stats.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(stats)
}

fn cardinality_loop(
    solver: &mut Solver,
    abnormal: Vec<Lit>,
    config: &EngineConfig,
    deadline: Option<Instant>,
    stats: &mut RunStats,
    sink: &mut impl FnMut(&Diagnosis),
) -> Outcome {
    let m = abnormal.len();
    let mut at_most = AtMost::new(abnormal.clone());
    let mut bound = 0usize;
    loop {
        let assumptions: Vec<Lit> = at_most.activate(solver, bound).into_iter().collect();
        stats.iterations += 1;
        match solver.solve_limited(&assumptions, deadline) {
            Status::Interrupted => return Outcome::BudgetExhausted,
            Status::Unsat => {
                if solver.core().is_empty() || bound >= m {
                    return if stats.diagnoses_emitted == 0 {
                        Outcome::NoDiagnosis
                    } else {
                        Outcome::Complete
                    };
                }
                bound += 1;
            }
            Status::Sat => {
                let d: Diagnosis = abnormal
                    .iter()
                    .enumerate()
                    .filter(|&(_, &l)| solver.model_value(l))
                    .map(|(i, _)| ComponentId::new(i as u32 + 1))
                    .collect();
                let blocking: Vec<Lit> = d.iter().map(|c| !abnormal[c.index()]).collect();
                solver.add_clause(&blocking);
                sink(&d);
                stats.diagnoses_emitted += 1;
                if config.limit_reached(stats.diagnoses_emitted) {
                    return Outcome::LimitReached;
                }
            }
        }
    }
}
