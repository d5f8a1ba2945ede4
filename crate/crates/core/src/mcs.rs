//! Minimal correction subsets of partial MaxSAT instances: linear-search
//! extraction (LBX style) and enumeration by blocking found sets.

use std::time::Instant;

use crate::formula::{Assignment, Clause, Lit, WcnfInstance};
use crate::sat::{Solver, Status};

/// A minimal correction subset together with a model of its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McsResult {
    /// Soft clause indices, ascending.
    pub mcs: Vec<usize>,
    pub model: Assignment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McsOutcome {
    Found(McsResult),
    /// The hard clauses (plus any blocking clauses) are unsatisfiable.
    HardUnsat,
    Interrupted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub count: usize,
    pub exhausted: bool,
    pub interrupted: bool,
}

/// One extraction/enumeration session over a fixed instance.
///
/// A unit soft clause `(l)` is enforced by assuming `l` directly; any other soft
/// clause `c` gets a fresh selector `s` and is stored as `(c ∨ ¬s)`.
#[derive(Debug, Clone)]
pub struct McsSolver {
    solver: Solver,
    soft: Vec<Clause>,
    selectors: Vec<Lit>,
    sat_calls: u64,
}

impl McsSolver {
    pub fn new(instance: &WcnfInstance) -> McsSolver {
        Self::with_solver(Solver::new(), instance)
    }

    pub fn with_solver(mut solver: Solver, instance: &WcnfInstance) -> McsSolver {
        solver.ensure_vars(instance.num_vars());
        for c in instance.hard.clauses() {
            solver.add(c);
        }
        let selectors = instance
            .soft
            .iter()
            .map(|c| {
                if c.len() == 1 {
                    c.lits()[0]
                } else {
                    let s = solver.new_var().pos();
                    let mut guarded = c.lits().to_vec();
                    guarded.push(!s);
                    solver.add_clause(&guarded);
                    s
                }
            })
            .collect();
        McsSolver {
            solver,
            soft: instance.soft.clone(),
            selectors,
            sat_calls: 0,
        }
    }

    pub fn sat_calls(&self) -> u64 {
        self.sat_calls
    }

    pub fn num_soft(&self) -> usize {
        self.soft.len()
    }

    fn solve(&mut self, assumptions: &[Lit], deadline: Option<Instant>) -> Status {
        self.sat_calls += 1;
        self.solver.solve_limited(assumptions, deadline)
    }

    fn soft_true_in_model(&self, i: usize) -> bool {
        self.soft[i].lits().iter().any(|&l| self.solver.model_value(l))
    }

    /// Linear search: seed the satisfied set from a model of the hard part, then try
    /// each remaining soft clause in ascending index order, adopting every new model.
    pub fn extract(&mut self, deadline: Option<Instant>) -> McsOutcome {
        match self.solve(&[], deadline) {
            Status::Unsat => return McsOutcome::HardUnsat,
            Status::Interrupted => return McsOutcome::Interrupted,
            Status::Sat => {}
        }
        let n = self.soft.len();
        let mut satisfied: Vec<bool> = (0..n).map(|i| self.soft_true_in_model(i)).collect();
        let mut assumptions: Vec<Lit> = (0..n).filter(|&i| satisfied[i]).map(|i| self.selectors[i]).collect();
        for i in 0..n {
            if satisfied[i] {
                continue;
            }
            assumptions.push(self.selectors[i]);
            match self.solve(&assumptions, deadline) {
                Status::Sat => {
                    satisfied[i] = true;
                    for j in i + 1..n {
                        if !satisfied[j] && self.soft_true_in_model(j) {
                            satisfied[j] = true;
                            assumptions.push(self.selectors[j]);
                        }
                    }
                }
                Status::Unsat => {
                    assumptions.pop();
                }
                Status::Interrupted => return McsOutcome::Interrupted,
            }
        }
        // Re-solve for a model of exactly the final satisfied set.
        match self.solve(&assumptions, deadline) {
            Status::Sat => {}
            Status::Interrupted => return McsOutcome::Interrupted,
            Status::Unsat => unreachable!("satisfied set was witnessed by a model"),
        }
        McsOutcome::Found(McsResult {
            mcs: (0..n).filter(|&i| !satisfied[i]).collect(),
            model: self.solver.model_assignment(),
        })
    }

    /// Requires at least one member of `mcs` to be satisfied from now on,
    /// excluding `mcs` and all of its supersets.
    pub fn block(&mut self, mcs: &[usize]) {
        let clause: Vec<Lit> = mcs.iter().map(|&i| self.selectors[i]).collect();
        self.solver.add_clause(&clause);
    }

    /// Extracts and blocks MCSes until the hard part becomes unsatisfiable, `limit`
    /// sets were emitted, the deadline passed, or `sink` returns false.
    pub fn enumerate(
        &mut self,
        limit: Option<usize>,
        deadline: Option<Instant>,
        mut sink: impl FnMut(&McsResult) -> bool,
    ) -> EnumerationSummary {
        let mut summary = EnumerationSummary::default();
        loop {
            if limit.is_some_and(|k| summary.count >= k) {
                return summary;
            }
            match self.extract(deadline) {
                McsOutcome::HardUnsat => {
                    summary.exhausted = true;
                    return summary;
                }
                McsOutcome::Interrupted => {
                    summary.interrupted = true;
                    return summary;
                }
                McsOutcome::Found(res) => {
                    summary.count += 1;
                    self.block(&res.mcs);
                    if !sink(&res) {
                        return summary;
                    }
                }
            }
        }
    }
}

pub fn extract_mcs(instance: &WcnfInstance) -> McsOutcome {
    McsSolver::new(instance).extract(None)
}

pub fn enumerate_mcs(
    instance: &WcnfInstance,
    limit: Option<usize>,
    sink: impl FnMut(&McsResult) -> bool,
) -> EnumerationSummary {
    McsSolver::new(instance).enumerate(limit, None, sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eval_formula, CnfFormula};
    use proptest::prelude::*;

    fn cl(v: &[i32]) -> Clause {
        Clause::from_dimacs(v).unwrap()
    }

    fn inst(hard: &[&[i32]], soft: &[&[i32]]) -> WcnfInstance {
        WcnfInstance::new(hard.iter().map(|c| cl(c)).collect(), soft.iter().map(|c| cl(c)).collect())
    }

    fn found(o: McsOutcome) -> McsResult {
        match o {
            McsOutcome::Found(r) => r,
            other => panic!("expected an MCS, got {other:?}"),
        }
    }

    fn all_mcses(w: &WcnfInstance) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let summary = enumerate_mcs(w, None, |r| {
            out.push(r.mcs.clone());
            true
        });
        assert!(summary.exhausted);
        assert_eq!(summary.count, out.len());
        out
    }

    #[test]
    fn two_contradictory_units() {
        let w = inst(&[], &[&[1], &[-1]]);
        assert_eq!(found(extract_mcs(&w)).mcs.len(), 1);
        let mut all = all_mcses(&w);
        all.sort();
        assert_eq!(all, vec![vec![0], vec![1]]);
    }

    #[test]
    fn forced_by_hard() {
        let w = inst(&[&[1]], &[&[-1], &[2]]);
        let r = found(extract_mcs(&w));
        assert_eq!(r.mcs, vec![0]);
        assert_eq!(r.model.get(crate::formula::Var::from_index(2)), Some(true));
    }

    #[test]
    fn hard_unsat() {
        let w = inst(&[&[1], &[-1]], &[&[2]]);
        assert_eq!(extract_mcs(&w), McsOutcome::HardUnsat);
        let s = enumerate_mcs(&w, None, |_| true);
        assert_eq!((s.count, s.exhausted), (0, true));
    }

    #[test]
    fn limit_one_not_exhausted() {
        let w = inst(&[], &[&[1], &[-1]]);
        let s = enumerate_mcs(&w, Some(1), |_| true);
        assert_eq!((s.count, s.exhausted), (1, false));
    }

    #[test]
    fn all_softs_satisfiable_gives_empty_mcs_once() {
        let w = inst(&[&[1, 2]], &[&[1], &[2, 3]]);
        assert_eq!(all_mcses(&w), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn non_unit_soft_uses_selector() {
        let w = inst(&[&[-1], &[-2]], &[&[1, 2], &[3]]);
        assert_eq!(all_mcses(&w), vec![vec![0]]);
    }

    fn brute_mcses(num_vars: u32, hard: &[Vec<i32>], soft: &[Vec<i32>]) -> Vec<Vec<usize>> {
        let sat = |keep: u32| {
            (0u32..1 << num_vars).any(|m| {
                let val = |l: &i32| {
                    let b = m >> (l.unsigned_abs() - 1) & 1 == 1;
                    if *l > 0 { b } else { !b }
                };
                hard.iter().all(|c| c.iter().any(val))
                    && soft.iter().enumerate().all(|(i, c)| keep >> i & 1 == 0 || c.iter().any(val))
            })
        };
        let n = soft.len();
        let full = (1u32 << n) - 1;
        let mut out = Vec::new();
        for removed in 0u32..1 << n {
            let keep = full & !removed;
            if !sat(keep) {
                continue;
            }
            let minimal = (0..n).filter(|&i| removed >> i & 1 == 1).all(|i| !sat(keep | 1 << i));
            if minimal {
                out.push((0..n).filter(|&i| removed >> i & 1 == 1).collect());
            }
        }
        out.sort();
        out
    }

    fn lit(n: i32) -> impl Strategy<Value = i32> {
        (1..=n, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn enumeration_matches_brute_force(
            hard in prop::collection::vec(prop::collection::vec(lit(5), 1..3), 0..4),
            soft in prop::collection::vec(prop::collection::vec(lit(5), 1..3), 1..9),
        ) {
            let w = WcnfInstance::new(
                hard.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect::<CnfFormula>(),
                soft.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect(),
            );
            let expected = brute_mcses(5, &hard, &soft);
            let mut got = Vec::new();
            let mut prior: Vec<Vec<usize>> = Vec::new();
            let summary = enumerate_mcs(&w, None, |r| {
                // complement satisfied by the reported model
                for (i, c) in w.soft.iter().enumerate() {
                    if !r.mcs.contains(&i) {
                        assert!(c.is_satisfied_by(&r.model).unwrap());
                    }
                }
                assert!(eval_formula(&w.hard, &r.model).unwrap());
                // never a superset of an earlier set
                for p in &prior {
                    assert!(!p.iter().all(|i| r.mcs.contains(i)));
                }
                prior.push(r.mcs.clone());
                got.push(r.mcs.clone());
                true
            });
            prop_assert!(summary.exhausted);
            got.sort();
            prop_assert_eq!(got, expected);
        }
    }
}
