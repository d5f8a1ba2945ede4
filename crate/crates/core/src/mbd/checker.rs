use std::time::Instant;

use crate::formula::Lit;
use crate::sat::{SatResult, Solver, SolverConfig, Status};

use super::{ComponentSet, Explanation, MbdError, Observation, SystemDescription};

/// Consistency oracle over a single copy of the system. Every observation and every
/// candidate diagnosis is applied through assumptions against one clause database.
#[derive(Debug, Clone)]
pub struct ConsistencyChecker<'a> {
    sd: &'a SystemDescription,
    solver: Solver,
    sat_calls: u64,
    deadline: Option<Instant>,
}

impl<'a> ConsistencyChecker<'a> {
    pub fn new(sd: &'a SystemDescription) -> ConsistencyChecker<'a> {
        Self::with_config(sd, SolverConfig::default())
    }

    pub fn with_config(sd: &'a SystemDescription, config: SolverConfig) -> ConsistencyChecker<'a> {
        let mut solver = Solver::with_config(config);
        solver.ensure_vars(sd.num_vars());
        for c in sd.clauses() {
            solver.add(c);
        }
        ConsistencyChecker {
            sd,
            solver,
            sat_calls: 0,
            deadline: None,
        }
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn system(&self) -> &'a SystemDescription {
        self.sd
    }

    pub fn sat_calls(&self) -> u64 {
        self.sat_calls
    }

    pub fn num_solver_vars(&self) -> u32 {
        self.solver.num_vars()
    }

    fn assumptions(&self, delta: &ComponentSet, obs: &Observation) -> Vec<Lit> {
        let mut a: Vec<Lit> = self
            .sd
            .components()
            .map(|c| {
                let ab = self.sd.ab_lit(c);
                if delta.contains(c) {
                    ab
                } else {
                    !ab
                }
            })
            .collect();
        a.extend_from_slice(obs.units());
        a
    }

    fn run(&mut self, assumptions: &[Lit]) -> Result<bool, MbdError> {
        self.sat_calls += 1;
        match self.solver.solve_limited(assumptions, self.deadline) {
            Status::Sat => Ok(true),
            Status::Unsat => Ok(false),
            Status::Interrupted => Err(MbdError::Interrupted),
        }
    }

    /// Solves with `delta` abnormal, everything else healthy, and `obs` fixed.
    pub fn check_consistency(&mut self, delta: &ComponentSet, obs: &Observation) -> Result<SatResult, MbdError> {
        self.sd.check_components(delta)?;
        self.sd.check_observation(obs)?;
        let a = self.assumptions(delta, obs);
        Ok(if self.run(&a)? {
            SatResult::Sat(self.solver.model_assignment())
        } else {
            SatResult::Unsat(self.solver.core().to_vec())
        })
    }

    pub fn is_consistent(&mut self, delta: &ComponentSet, obs: &Observation) -> Result<bool, MbdError> {
        self.sd.check_components(delta)?;
        self.sd.check_observation(obs)?;
        let a = self.assumptions(delta, obs);
        self.run(&a)
    }

    /// Declares exactly `healthy` healthy; every other component is left unconstrained,
    /// which under the weak fault model is the same as abnormal.
    pub fn healthy_consistent(&mut self, healthy: &ComponentSet, obs: &Observation) -> Result<bool, MbdError> {
        let mut a: Vec<Lit> = healthy.iter().map(|c| !self.sd.ab_lit(c)).collect();
        a.extend_from_slice(obs.units());
        self.run(&a)
    }

    fn healthy_in_core(&self) -> ComponentSet {
        self.solver
            .core()
            .iter()
            .filter_map(|&l| self.component_of_healthy_lit(l))
            .collect()
    }

    fn component_of_healthy_lit(&self, l: Lit) -> Option<super::ComponentId> {
        let v = l.var().index();
        let base = self.sd.num_system_vars();
        if !l.is_positive() && v > base && v <= self.sd.num_vars() {
            Some(super::ComponentId::new(v - base))
        } else {
            None
        }
    }

    /// Minimal set of components outside `delta` that cannot all be healthy under `obs`.
    /// Starts from the solver core and deletes components in ascending id order,
    /// shrinking to each new core whenever a deletion keeps the set inconsistent.
    /// An empty result means `obs` is inconsistent even with every component abnormal.
    pub fn extract_explanation(&mut self, delta: &ComponentSet, obs: &Observation) -> Result<Explanation, MbdError> {
        self.sd.check_components(delta)?;
        self.sd.check_observation(obs)?;
        let a = self.assumptions(delta, obs);
        if self.run(&a)? {
            return Err(MbdError::ConsistentCandidate { obs: obs.id });
        }
        let mut current: Vec<_> = self.healthy_in_core().ids().to_vec();
        let mut i = 0;
        while i < current.len() {
            let trial: ComponentSet = current.iter().copied().filter(|&c| c != current[i]).collect();
            if self.healthy_consistent(&trial, obs)? {
                i += 1;
            } else {
                // Necessary members already passed over are always in the new core.
                let core = self.healthy_in_core();
                current.retain(|&c| core.contains(c));
            }
        }
        Ok(Explanation {
            components: current.into_iter().collect(),
            witness_obs: obs.id,
        })
    }

    /// Consistent with every observation, and no single removal stays consistent.
    pub fn verify_diagnosis(&mut self, delta: &ComponentSet, observations: &[Observation]) -> Result<bool, MbdError> {
        for obs in observations {
            if !self.is_consistent(delta, obs)? {
                return Ok(false);
            }
        }
        for c in delta.iter() {
            let smaller = delta.without(c);
            let mut all = true;
            for obs in observations {
                if !self.is_consistent(&smaller, obs)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `expl` healthy is inconsistent with its witness, and every proper subset is consistent.
    pub fn is_minimal_explanation(&mut self, expl: &Explanation, observations: &[Observation]) -> Result<bool, MbdError> {
        let obs = observations
            .iter()
            .find(|o| o.id == expl.witness_obs)
            .ok_or(MbdError::UnknownObservation(expl.witness_obs))?;
        if self.healthy_consistent(&expl.components, obs)? {
            return Ok(false);
        }
        for c in expl.components.iter() {
            if !self.healthy_consistent(&expl.components.without(c), obs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Observations that fail with every component healthy.
    pub fn failing(&mut self, observations: &[Observation]) -> Result<Vec<bool>, MbdError> {
        let empty = ComponentSet::new();
        observations.iter().map(|o| self.is_consistent(&empty, o).map(|c| !c)).collect()
    }
}
