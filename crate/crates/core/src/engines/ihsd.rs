use std::time::Instant;

use crate::hitting_set::{ExplanationStore, HittingSetError};
use crate::mbd::{ConsistencyChecker, Diagnosis, Explanation, MbdError, Observation, SystemDescription};

use super::{EngineConfig, Outcome, RunStats};

#[derive(Debug, Clone)]
pub struct IhsdReport {
    pub stats: RunStats,
    /// Every explanation added to the store, in discovery order.
    pub explanations: Vec<Explanation>,
}

/// Alternates minimal hitting sets of the known explanations with consistency
/// checks over a single copy of the system. A candidate that fails some observation
/// yields a new explanation; one that passes all of them is reported through `sink`
/// and blocked.
///
/// Observations that already pass with every component healthy are dropped with a
/// warning. Observations are scanned round-robin, starting after the one that
/// failed most recently.
pub fn ihsd_enumerate(
    sd: &SystemDescription,
    observations: &[Observation],
    config: &EngineConfig,
    mut sink: impl FnMut(&Diagnosis),
) -> Result<IhsdReport, MbdError> {
    let start = Instant::now();
    for o in observations {
        sd.check_observation(o)?;
    }
    let mut checker = ConsistencyChecker::with_config(sd, config.solver_config());
    checker.set_deadline(config.deadline(start));
    let mut stats = RunStats::new();
    let mut explanations = Vec::new();
    let mut store = ExplanationStore::new(sd.num_components());

    let result = run(start, observations, config, &mut checker, &mut store, &mut stats, &mut explanations, &mut sink);
    stats.outcome = match result {
        Ok(outcome) => outcome,
        Err(MbdError::Interrupted) => Outcome::BudgetExhausted,
        Err(e) => return Err(e),
    };
    stats.sat_calls = checker.sat_calls() + store.sat_calls();
    stats.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(IhsdReport { stats, explanations })
}

#[allow(clippy::too_many_arguments)]
fn run(
    start: Instant,
    observations: &[Observation],
    config: &EngineConfig,
    checker: &mut ConsistencyChecker<'_>,
    store: &mut ExplanationStore,
    stats: &mut RunStats,
    explanations: &mut Vec<Explanation>,
    sink: &mut impl FnMut(&Diagnosis),
) -> Result<Outcome, MbdError> {
    let failing_flags = checker.failing(observations)?;
    let failing: Vec<&Observation> = observations
        .iter()
        .zip(&failing_flags)
        .filter_map(|(o, &f)| {
            if !f {
                log::warn!("observation {} is consistent with a healthy system; ignoring it", o.id);
            }
            f.then_some(o)
        })
        .collect();
    let n = failing.len();
    let mut next_start = 0usize;
    let deadline = config.deadline(start);

    loop {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(MbdError::Interrupted);
        }
        stats.iterations += 1;
        let Some(candidate) = store.next_min_hs(config.mode) else {
            return Ok(Outcome::Complete);
        };
        let mut refuted = false;
        for step in 0..n {
            let i = (next_start + step) % n;
            let obs = failing[i];
            if checker.is_consistent(&candidate, obs)? {
                continue;
            }
            let expl = checker.extract_explanation(&candidate, obs)?;
            match store.add_explanation(&expl.components) {
                Ok(_) => {}
                Err(HittingSetError::EmptyExplanation) => {
                    log::warn!("observation {} cannot be fixed by any set of abnormal components", obs.id);
                    return Ok(Outcome::NoDiagnosis);
                }
                Err(HittingSetError::OutOfUniverse(c)) => return Err(MbdError::UnknownComponent(c)),
            }
            explanations.push(expl);
            stats.explanations_found += 1;
            next_start = (i + 1) % n;
            refuted = true;
            break;
        }
        if refuted {
            if config.max_explanations.is_some_and(|cap| stats.explanations_found >= cap) {
                return Ok(Outcome::BudgetExhausted);
            }
            continue;
        }
        sink(&candidate);
        stats.diagnoses_emitted += 1;
        store.block_diagnosis(&candidate).expect("candidate comes from the store");
        if config.limit_reached(stats.diagnoses_emitted) {
            return Ok(Outcome::LimitReached);
        }
    }
}
