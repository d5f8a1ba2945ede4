use std::time::Instant;

use crate::formula::{Clause, CnfFormula, WcnfInstance};
use crate::hitting_set::Minimality;
use crate::mbd::{ComponentId, ComponentSet, Diagnosis, MbdError, Observation, SystemDescription};
use crate::mcs::McsSolver;
use crate::par;
use crate::sat::Solver;

use super::{EngineConfig, Outcome, RunStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationDiagnoses {
    pub obs_id: u32,
    pub diagnoses: Vec<Diagnosis>,
    pub exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct SeparateReport {
    /// One entry per observation, in input order.
    pub per_obs: Vec<ObservationDiagnoses>,
    /// Combined diagnoses, `None` when assemblage ran out of time.
    pub assembled: Option<Vec<Diagnosis>>,
    pub stats: RunStats,
}

impl SeparateReport {
    pub fn all_exhausted(&self) -> bool {
        self.per_obs.iter().all(|o| o.exhausted)
    }
}

/// Partial MaxSAT view of one observation: the system clauses and observation
/// units are hard, each `¬Ab(c)` is a unit soft clause.
fn observation_instance(sd: &SystemDescription, obs: &Observation) -> WcnfInstance {
    let mut hard: CnfFormula = sd.clauses().iter().cloned().collect();
    hard.ensure_vars(sd.num_vars());
    for &u in obs.units() {
        hard.push(Clause::new(vec![u]));
    }
    let soft = sd.components().map(|c| Clause::new(vec![!sd.ab_lit(c)])).collect();
    WcnfInstance::new(hard, soft)
}

/// Enumerates every minimal diagnosis of each observation on its own, one solver
/// per observation, then combines them with [`assemble`] when all enumerations
/// finished. Diagnoses are emitted only from a complete assemblage.
pub fn separate_enumerate(
    sd: &SystemDescription,
    observations: &[Observation],
    config: &EngineConfig,
    mut sink: impl FnMut(&Diagnosis),
) -> Result<SeparateReport, MbdError> {
    let start = Instant::now();
    for o in observations {
        sd.check_observation(o)?;
    }
    let deadline = config.deadline(start);
    let solver_config = config.solver_config();
    let results = par::map(config.execution, observations, |obs| {
        let instance = observation_instance(sd, obs);
        let mut mcs = McsSolver::with_solver(Solver::with_config(solver_config), &instance);
        let mut diagnoses = Vec::new();
        let summary = mcs.enumerate(None, deadline, |res| {
            diagnoses.push(res.mcs.iter().map(|&i| ComponentId::new(i as u32 + 1)).collect());
            true
        });
        let entry = ObservationDiagnoses {
            obs_id: obs.id,
            diagnoses,
            exhausted: summary.exhausted,
        };
        (entry, mcs.sat_calls())
    });

    let mut stats = RunStats::new();
    stats.sat_calls = results.iter().map(|(_, calls)| calls).sum();
    stats.iterations = results.iter().map(|(e, _)| e.diagnoses.len() as u64).sum();
    let per_obs: Vec<ObservationDiagnoses> = results.into_iter().map(|(e, _)| e).collect();

    let mut assembled = None;
    if per_obs.iter().all(|o| o.exhausted) {
        let sets: Vec<Vec<Diagnosis>> = per_obs.iter().map(|o| o.diagnoses.clone()).collect();
        assembled = assemble_until(&sets, deadline);
    }
    stats.outcome = match &assembled {
        None => Outcome::BudgetExhausted,
        Some(all) if all.is_empty() => Outcome::NoDiagnosis,
        Some(_) => Outcome::Complete,
    };
    if let Some(all) = &mut assembled {
        if config.mode == Minimality::Cardinality {
            all.sort_by_key(ComponentSet::len);
        }
        for d in all.iter() {
            if config.limit_reached(stats.diagnoses_emitted) {
                stats.outcome = Outcome::LimitReached;
                break;
            }
            sink(d);
            stats.diagnoses_emitted += 1;
        }
    }
    stats.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(SeparateReport {
        per_obs,
        assembled,
        stats,
    })
}

/// Keeps the subset-minimal members, sorted by size then lexicographically.
fn minimize(mut sets: Vec<ComponentSet>) -> Vec<ComponentSet> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<ComponentSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

/// Subset-minimal members of `{D_1 ∪ … ∪ D_r : D_i ∈ per_obs[i]}`, merging one
/// observation at a time and pruning subsumed unions after each merge.
pub fn assemble(per_obs: &[Vec<Diagnosis>]) -> Vec<Diagnosis> {
    assemble_until(per_obs, None).expect("no deadline")
}

/// [`assemble`] that gives up with `None` once `deadline` passes.
pub fn assemble_until(per_obs: &[Vec<Diagnosis>], deadline: Option<std::time::Instant>) -> Option<Vec<Diagnosis>> {
    let mut acc = vec![ComponentSet::new()];
    for sets in per_obs {
        let mut merged = Vec::with_capacity(acc.len() * sets.len());
        for a in &acc {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            for s in sets {
                merged.push(a.union(s));
            }
        }
        acc = minimize(merged);
    }
    Some(acc)
}
