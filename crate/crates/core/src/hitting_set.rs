//! Minimal hitting sets over a growing collection of explanations, with blocking
//! of already reported diagnoses.
//!
//! Each component `c` has a pick variable `p_c` (variable `c` of the store's own
//! solver). An explanation `U` adds `∨_{c∈U} p_c`; blocking a diagnosis `D` adds
//! `∨_{c∈D} ¬p_c`, which excludes `D` and all of its supersets.

use std::collections::HashSet;

use thiserror::Error;

use crate::card::AtMost;
use crate::formula::{Lit, Var};
use crate::mbd::{ComponentId, ComponentSet};
use crate::sat::{Solver, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Minimality {
    #[default]
    Subset,
    Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HittingSetError {
    /// No set of abnormal components can fix the witnessing observation.
    #[error("empty explanation: some observation admits no diagnosis")]
    EmptyExplanation,
    #[error("component {0} is outside the universe")]
    OutOfUniverse(u32),
}

#[derive(Debug, Clone)]
pub struct ExplanationStore {
    universe: usize,
    sets: Vec<ComponentSet>,
    known: HashSet<ComponentSet>,
    blocked: Vec<ComponentSet>,
    /// For each component index, the stored sets containing it.
    occurs: Vec<Vec<usize>>,
    solver: Solver,
    at_most: AtMost,
    cardinality_floor: usize,
    sat_calls: u64,
}

impl ExplanationStore {
    /// Store over components `1..=universe`.
    pub fn new(universe: usize) -> ExplanationStore {
        let mut solver = Solver::new();
        solver.ensure_vars(universe as u32);
        let picks = (1..=universe as u32).map(|v| Var::from_index(v).pos()).collect();
        ExplanationStore {
            universe,
            sets: Vec::new(),
            known: HashSet::new(),
            blocked: Vec::new(),
            occurs: vec![Vec::new(); universe],
            solver,
            at_most: AtMost::new(picks),
            cardinality_floor: 0,
            sat_calls: 0,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[ComponentSet] {
        &self.sets
    }

    pub fn blocked(&self) -> &[ComponentSet] {
        &self.blocked
    }

    pub fn sat_calls(&self) -> u64 {
        self.sat_calls
    }

    fn pick(c: ComponentId) -> Lit {
        Var::from_index(c.get()).pos()
    }

    fn check_universe(&self, set: &ComponentSet) -> Result<(), HittingSetError> {
        match set.iter().find(|c| c.index() >= self.universe) {
            Some(c) => Err(HittingSetError::OutOfUniverse(c.get())),
            None => Ok(()),
        }
    }

    /// Adds a covering constraint. Returns false if the set was already stored.
    pub fn add_explanation(&mut self, expl: &ComponentSet) -> Result<bool, HittingSetError> {
        if expl.is_empty() {
            return Err(HittingSetError::EmptyExplanation);
        }
        self.check_universe(expl)?;
        if !self.known.insert(expl.clone()) {
            return Ok(false);
        }
        let clause: Vec<Lit> = expl.iter().map(Self::pick).collect();
        self.solver.add_clause(&clause);
        let idx = self.sets.len();
        for c in expl.iter() {
            self.occurs[c.index()].push(idx);
        }
        self.sets.push(expl.clone());
        Ok(true)
    }

    /// Excludes `diag` and all of its supersets from future answers.
    pub fn block_diagnosis(&mut self, diag: &ComponentSet) -> Result<(), HittingSetError> {
        self.check_universe(diag)?;
        let clause: Vec<Lit> = diag.iter().map(|c| !Self::pick(c)).collect();
        self.solver.add_clause(&clause);
        self.blocked.push(diag.clone());
        Ok(())
    }

    pub fn next_min_hs(&mut self, mode: Minimality) -> Option<ComponentSet> {
        match mode {
            Minimality::Subset => self.next_subset_minimal(),
            Minimality::Cardinality => self.next_cardinality_minimal(),
        }
    }

    fn model_picks(&self) -> Vec<ComponentId> {
        (1..=self.universe as u32)
            .map(ComponentId::new)
            .filter(|&c| self.solver.model_value(Self::pick(c)))
            .collect()
    }

    /// Any model, then drop picks in ascending id while every stored set stays hit.
    /// Dropping picks never violates a blocking clause, so no re-solve is needed.
    fn next_subset_minimal(&mut self) -> Option<ComponentSet> {
        self.sat_calls += 1;
        if self.solver.solve_limited(&[], None) != Status::Sat {
            return None;
        }
        let picks = self.model_picks();
        let mut hit_count = vec![0usize; self.sets.len()];
        for c in &picks {
            for &s in &self.occurs[c.index()] {
                hit_count[s] += 1;
            }
        }
        let mut kept = Vec::with_capacity(picks.len());
        for c in picks {
            let sets = &self.occurs[c.index()];
            if sets.iter().all(|&s| hit_count[s] >= 2) {
                for &s in sets {
                    hit_count[s] -= 1;
                }
            } else {
                kept.push(c);
            }
        }
        Some(kept.into_iter().collect())
    }

    /// Raises the bound from the last optimum until satisfiable. Constraints only
    /// accumulate, so the optimum never decreases between calls.
    fn next_cardinality_minimal(&mut self) -> Option<ComponentSet> {
        let mut bound = self.cardinality_floor;
        loop {
            let act = self.at_most.activate(&mut self.solver, bound);
            let assumptions: Vec<Lit> = act.into_iter().collect();
            self.sat_calls += 1;
            match self.solver.solve_limited(&assumptions, None) {
                Status::Sat => {
                    let picks = self.model_picks();
                    self.cardinality_floor = picks.len();
                    return Some(picks.into_iter().collect());
                }
                Status::Unsat => {
                    if self.solver.core().is_empty() || bound >= self.universe {
                        return None;
                    }
                    bound += 1;
                }
                Status::Interrupted => unreachable!("no deadline"),
            }
        }
    }
}
