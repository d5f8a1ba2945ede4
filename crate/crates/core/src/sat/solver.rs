//! Incremental CDCL solver: two-watched-literal propagation, first-UIP learning
//! with local clause minimization, VSIDS with phase saving, Luby restarts and
//! activity-based learnt clause deletion. Assumptions are decided first, one per
//! decision level, and a failed assumption yields a core over the assumption set.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use crate::formula::{Assignment, Clause, Lit, Var};

type CRef = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    /// The deadline passed before an answer was found.
    Interrupted,
}

/// Answer of [`Solver::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    /// Subset of the assumptions that, together with the clauses, is unsatisfiable.
    Unsat(Vec<Lit>),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub seed: u64,
    /// Probability of a random decision. Zero keeps the search fully activity-driven.
    pub random_var_freq: f64,
    pub var_decay: f64,
    pub clause_decay: f64,
    pub restart_base: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            random_var_freq: 0.0,
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_base: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    removed: bool,
    activity: f32,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

#[inline]
fn lit_value(assigns: &[Option<bool>], lit: Lit) -> Option<bool> {
    assigns[lit.var().index() as usize].map(|v| v == lit.is_positive())
}

#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    num_vars: u32,
    ok: bool,

    clauses: Vec<ClauseData>,
    free_crefs: Vec<CRef>,
    learnts: Vec<CRef>,
    num_original: usize,
    watches: Vec<Vec<Watcher>>,

    assigns: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    order: VarHeap,
    max_learnts: f64,

    assumptions: Vec<Lit>,
    model: Vec<bool>,
    core: Vec<Lit>,
    rng: ChaCha8Rng,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver::with_config(SolverConfig::default())
    }

    pub fn with_config(config: SolverConfig) -> Solver {
        Solver {
            config,
            num_vars: 0,
            ok: true,
            clauses: Vec::new(),
            free_crefs: Vec::new(),
            learnts: Vec::new(),
            num_original: 0,
            watches: vec![Vec::new(), Vec::new()],
            assigns: vec![None],
            level: vec![0],
            reason: vec![None],
            polarity: vec![false],
            seen: vec![false],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0],
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            max_learnts: 0.0,
            assumptions: Vec::new(),
            model: Vec::new(),
            core: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            stats: SolverStats::default(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Number of original (non-learnt) clauses currently stored.
    pub fn num_clauses(&self) -> usize {
        self.num_original
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the clause database alone has been shown unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        let v = self.num_vars;
        self.assigns.push(None);
        self.level.push(0);
        self.reason.push(None);
        self.polarity.push(false);
        self.seen.push(false);
        self.activity.push(0.0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.insert(v, &self.activity);
        Var::from_index(v)
    }

    pub fn ensure_vars(&mut self, n: u32) {
        while self.num_vars < n {
            self.new_var();
        }
    }

    /// Adds a clause permanently. Variables beyond the current range are created.
    /// Returns false if the database became unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let max = lits.iter().map(|l| l.var().index()).max().unwrap_or(0);
        self.ensure_vars(max);

        let mut ls = lits.to_vec();
        ls.sort_unstable();
        ls.dedup();
        let mut out = Vec::with_capacity(ls.len());
        for (i, &l) in ls.iter().enumerate() {
            if i > 0 && ls[i - 1] == !l {
                return true;
            }
            match lit_value(&self.assigns, l) {
                Some(true) => return true,
                Some(false) => {}
                None => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.alloc_clause(out, false);
                self.num_original += 1;
                true
            }
        }
    }

    pub fn add(&mut self, clause: &Clause) -> bool {
        self.add_clause(clause.lits())
    }

    /// Solves under `assumptions` with no time limit.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SatResult {
        match self.solve_limited(assumptions, None) {
            Status::Sat => SatResult::Sat(self.model_assignment()),
            Status::Unsat => SatResult::Unsat(self.core.clone()),
            Status::Interrupted => unreachable!("no deadline was given"),
        }
    }

    /// Solves under `assumptions`, giving up once `deadline` has passed.
    /// After `Sat` the model is available through [`Solver::model_value`];
    /// after `Unsat` the core through [`Solver::core`].
    pub fn solve_limited(&mut self, assumptions: &[Lit], deadline: Option<Instant>) -> Status {
        self.stats.solves += 1;
        self.model.clear();
        self.core.clear();
        if !self.ok {
            return Status::Unsat;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Status::Interrupted;
        }
        let max = assumptions.iter().map(|l| l.var().index()).max().unwrap_or(0);
        self.ensure_vars(max);
        self.assumptions = assumptions.to_vec();
        self.max_learnts = (self.num_original as f64 / 3.0).max(5000.0);

        let mut status = None;
        let mut curr_restarts = 0u32;
        while status.is_none() {
            let budget = luby(2.0, curr_restarts) * self.config.restart_base as f64;
            status = self.search(budget as u64, deadline);
            curr_restarts += 1;
            if status.is_none() {
                self.stats.restarts += 1;
            }
        }
        let status = status.expect("loop exits with a status");
        if status == Status::Sat {
            self.model = (0..=self.num_vars as usize)
                .map(|v| self.assigns[v].unwrap_or(false))
                .collect();
        }
        self.cancel_until(0);
        self.assumptions.clear();
        status
    }

    /// Value of `lit` in the last model. Variables created after the last solve read as false.
    pub fn model_value(&self, lit: Lit) -> bool {
        let v = self.model.get(lit.var().index() as usize).copied().unwrap_or(false);
        v == lit.is_positive()
    }

    pub fn model_assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for v in 1..self.model.len() {
            a.set(Var::from_index(v as u32), self.model[v]);
        }
        a
    }

    /// Failed assumptions from the last unsatisfiable call.
    pub fn core(&self) -> &[Lit] {
        &self.core
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn alloc_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let data = ClauseData {
            lits,
            learnt,
            removed: false,
            activity: 0.0,
        };
        let cref = if let Some(c) = self.free_crefs.pop() {
            self.clauses[c as usize] = data;
            c
        } else {
            self.clauses.push(data);
            (self.clauses.len() - 1) as CRef
        };
        let c = &self.clauses[cref as usize];
        let (l0, l1) = (c.lits[0], c.lits[1]);
        self.watches[(!l0).code()].push(Watcher { cref, blocker: l1 });
        self.watches[(!l1).code()].push(Watcher { cref, blocker: l0 });
        cref
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<CRef>) {
        let v = lit.var().index() as usize;
        debug_assert!(self.assigns[v].is_none());
        self.assigns[v] = Some(lit.is_positive());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_value(&self.assigns, w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let clause = &mut self.clauses[w.cref as usize];
                if clause.removed {
                    continue;
                }
                if clause.lits[0] == false_lit {
                    clause.lits.swap(0, 1);
                }
                let first = clause.lits[0];
                let nw = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && lit_value(&self.assigns, first) == Some(true) {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.lits.len() {
                    if lit_value(&self.assigns, clause.lits[k]) != Some(false) {
                        clause.lits.swap(1, k);
                        let watch = !clause.lits[1];
                        self.watches[watch.code()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if lit_value(&self.assigns, first) == Some(false) {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for i in (lim..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            self.assigns[v as usize] = None;
            self.reason[v as usize] = None;
            self.polarity[v as usize] = lit.is_positive();
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
        self.qhead = lim;
    }

    fn bump_var(&mut self, v: u32) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in self.activity.iter_mut() {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit::new(Var::from_index(1), true)];
        let mut path_count = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;

        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[start..] {
                let v = q.var().index();
                if !self.seen[v as usize] && self.level[v as usize] > 0 {
                    self.seen[v as usize] = true;
                    self.bump_var(v);
                    if self.level[v as usize] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var().index() as usize] = false;
            path_count -= 1;
            if path_count == 0 {
                break;
            }
            confl = self.reason[lit.var().index() as usize].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("at least one literal resolved");

        // Drop literals whose reason is already covered by the clause.
        let to_clear: Vec<Lit> = learnt.clone();
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let v = l.var().index() as usize;
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|q| {
                    let qv = q.var().index() as usize;
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                kept.push(l);
            }
        }
        for l in to_clear {
            self.seen[l.var().index() as usize] = false;
        }

        let backjump = if kept.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..kept.len() {
                if self.level[kept[i].var().index() as usize] > self.level[kept[max_i].var().index() as usize] {
                    max_i = i;
                }
            }
            kept.swap(1, max_i);
            self.level[kept[1].var().index() as usize] as usize
        };
        (kept, backjump)
    }

    /// Collects the assumptions responsible for `failed` (an assumption that is false).
    fn analyze_final(&mut self, failed: Lit) {
        self.core.clear();
        self.core.push(failed);
        if self.decision_level() == 0 {
            return;
        }
        let fv = failed.var().index() as usize;
        self.seen[fv] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index() as usize;
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if lit != failed {
                        self.core.push(lit);
                    }
                }
                Some(r) => {
                    for q in &self.clauses[r as usize].lits[1..] {
                        let qv = q.var().index() as usize;
                        if self.level[qv] > 0 {
                            self.seen[qv] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[fv] = false;
    }

    fn pick_branch_lit(&mut self) -> Option<Lit> {
        if self.config.random_var_freq > 0.0 && self.num_vars > 0 && self.rng.gen::<f64>() < self.config.random_var_freq {
            let v = self.rng.gen_range(1..=self.num_vars);
            if self.assigns[v as usize].is_none() {
                return Some(Lit::new(Var::from_index(v), self.polarity[v as usize]));
            }
        }
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v as usize].is_none() {
                return Some(Lit::new(Var::from_index(v), self.polarity[v as usize]));
            }
        }
        None
    }

    fn locked(&self, cref: CRef) -> bool {
        let c = &self.clauses[cref as usize];
        let l0 = c.lits[0];
        self.reason[l0.var().index() as usize] == Some(cref) && lit_value(&self.assigns, l0) == Some(true)
    }

    fn reduce_db(&mut self) {
        let mut learnts = std::mem::take(&mut self.learnts);
        // Most active first; binary clauses are never removed.
        learnts.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.activity.partial_cmp(&ca.activity).expect("activities are finite")
        });
        let half = learnts.len() / 2;
        let mut keep = Vec::with_capacity(learnts.len());
        let mut freed = Vec::new();
        for (i, &cref) in learnts.iter().enumerate() {
            if i >= half && self.clauses[cref as usize].lits.len() > 2 && !self.locked(cref) {
                let c = &mut self.clauses[cref as usize];
                c.removed = true;
                c.lits = Vec::new();
                freed.push(cref);
            } else {
                keep.push(cref);
            }
        }
        self.learnts = keep;
        if !freed.is_empty() {
            let clauses = &self.clauses;
            for ws in self.watches.iter_mut() {
                ws.retain(|w| !clauses[w.cref as usize].removed);
            }
            self.free_crefs.extend(freed);
        }
    }

    fn search(&mut self, conflict_budget: u64, deadline: Option<Instant>) -> Option<Status> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(Status::Unsat);
                }
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.alloc_clause(learnt, true);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay as f32;
                if conflicts.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
                    self.cancel_until(0);
                    return Some(Status::Interrupted);
                }
            } else {
                if conflicts >= conflict_budget {
                    self.cancel_until(0);
                    if deadline.is_some_and(|d| Instant::now() >= d) {
                        return Some(Status::Interrupted);
                    }
                    return None;
                }
                if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }

                let mut next = None;
                while self.decision_level() < self.assumptions.len() {
                    let a = self.assumptions[self.decision_level()];
                    match lit_value(&self.assigns, a) {
                        Some(true) => self.trail_lim.push(self.trail.len()),
                        Some(false) => {
                            self.analyze_final(a);
                            return Some(Status::Unsat);
                        }
                        None => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(l) => l,
                    None => {
                        self.stats.decisions += 1;
                        match self.pick_branch_lit() {
                            Some(l) => l,
                            None => return Some(Status::Sat),
                        }
                    }
                };
                self.trail_lim.push(self.trail.len());
                self.enqueue(next, None);
            }
        }
    }
}

/// Luby sequence scaled by powers of `y`.
fn luby(y: f64, mut x: u32) -> f64 {
    let mut size = 1u32;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eval_formula, CnfFormula};
    use proptest::prelude::*;

    fn lits(v: &[i32]) -> Vec<Lit> {
        v.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()
    }

    fn model_of(r: &SatResult) -> &Assignment {
        match r {
            SatResult::Sat(m) => m,
            SatResult::Unsat(_) => panic!("expected sat"),
        }
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<f64> = (0..7).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, vec![1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn unit_clause_forces_value() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        let r = s.solve(&[]);
        assert_eq!(model_of(&r).get(Var::from_index(1)), Some(true));
    }

    #[test]
    fn contradictory_units_give_empty_core() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        s.add_clause(&lits(&[-1]));
        assert_eq!(s.solve(&[]), SatResult::Unsat(vec![]));
        assert_eq!(s.solve(&lits(&[2])), SatResult::Unsat(vec![]));
    }

    #[test]
    fn assumption_propagates() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[-1, 2]));
        let r = s.solve(&lits(&[1]));
        assert_eq!(model_of(&r).get(Var::from_index(2)), Some(true));
    }

    #[test]
    fn core_over_two_assumptions() {
        // a=1, b=2, x=3: (¬a ∨ x), (¬b ∨ ¬x)
        let mut s = Solver::new();
        s.add_clause(&lits(&[-1, 3]));
        s.add_clause(&lits(&[-2, -3]));
        match s.solve(&lits(&[1, 2])) {
            SatResult::Unsat(mut core) => {
                core.sort();
                assert_eq!(core, lits(&[1, 2]));
            }
            other => panic!("expected unsat, got {other:?}"),
        }
        // brute force: no proper subset of {a,b} is a core
        assert!(s.solve(&lits(&[1])).is_sat());
        assert!(s.solve(&lits(&[2])).is_sat());
        assert!(s.solve(&[]).is_sat());
    }

    #[test]
    fn unknown_variable_in_assumption() {
        let mut s = Solver::new();
        let r = s.solve(&lits(&[5]));
        assert_eq!(model_of(&r).get(Var::from_index(5)), Some(true));
    }

    #[test]
    fn assumption_against_clause() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        let r = s.solve(&lits(&[-1]));
        assert_eq!(model_of(&r).get(Var::from_index(2)), Some(true));
    }

    #[test]
    fn complementary_assumptions() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        match s.solve(&lits(&[3, -3])) {
            SatResult::Unsat(mut core) => {
                core.sort();
                assert_eq!(core, lits(&[3, -3]));
            }
            _ => panic!(),
        }
    }

    /// Pigeonhole 5 into 4: needs real conflict analysis.
    #[test]
    fn pigeonhole_unsat() {
        let (p, h) = (5, 4);
        let var = |i: i32, j: i32| i * h + j + 1;
        let mut s = Solver::new();
        for i in 0..p {
            s.add_clause(&lits(&(0..h).map(|j| var(i, j)).collect::<Vec<_>>()));
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&lits(&[-var(a, j), -var(b, j)]));
                }
            }
        }
        assert_eq!(s.solve(&[]), SatResult::Unsat(vec![]));
        assert!(s.stats().conflicts > 0);
    }

    #[test]
    fn deterministic_across_runs() {
        let build = || {
            let mut s = Solver::new();
            for c in [[1, 2, -3], [-1, 3, 4], [2, -4, 5], [-2, -5, 1], [3, 5, -1]] {
                s.add_clause(&lits(&c));
            }
            s
        };
        let (mut a, mut b) = (build(), build());
        for assume in [vec![1], vec![-2, 4], vec![5, -3]] {
            assert_eq!(a.solve(&lits(&assume)), b.solve(&lits(&assume)));
        }
    }

    fn brute_force_sat(n: u32, clauses: &[Vec<i32>], assumptions: &[i32]) -> bool {
        (0u32..1 << n).any(|m| {
            let val = |l: i32| {
                let b = m >> (l.unsigned_abs() - 1) & 1 == 1;
                if l > 0 {
                    b
                } else {
                    !b
                }
            };
            assumptions.iter().all(|&a| val(a)) && clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        })
    }

    fn clause_strategy(n: i32) -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec((1..=n, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v }), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_brute_force(
            clauses in prop::collection::vec(clause_strategy(8), 0..40),
            assumptions in prop::collection::vec((1..=8i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v }), 0..4),
        ) {
            let mut s = Solver::new();
            s.ensure_vars(8);
            for c in &clauses {
                s.add_clause(&lits(c));
            }
            let expected = brute_force_sat(8, &clauses, &assumptions);
            let result = s.solve(&lits(&assumptions));
            prop_assert_eq!(result.is_sat(), expected);
            match result {
                SatResult::Sat(model) => {
                    let f: CnfFormula = clauses.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect();
                    prop_assert!(eval_formula(&f, &model).unwrap());
                    for a in lits(&assumptions) {
                        prop_assert_eq!(model.lit_value(a), Some(true));
                    }
                }
                SatResult::Unsat(core) => {
                    let assumed = lits(&assumptions);
                    for l in &core {
                        prop_assert!(assumed.contains(l));
                    }
                    let core_ints: Vec<i32> = core.iter().map(|l| l.to_dimacs()).collect();
                    prop_assert!(!brute_force_sat(8, &clauses, &core_ints));
                    prop_assert!(!s.solve(&core).is_sat());
                }
            }
        }

        #[test]
        fn incremental_sequence_matches_brute_force(
            clauses in prop::collection::vec(clause_strategy(6), 1..25),
            queries in prop::collection::vec(prop::collection::vec((1..=6i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v }), 0..3), 1..6),
        ) {
            let mut s = Solver::new();
            let mut added: Vec<Vec<i32>> = Vec::new();
            for (i, c) in clauses.iter().enumerate() {
                s.add_clause(&lits(c));
                added.push(c.clone());
                let q = &queries[i % queries.len()];
                prop_assert_eq!(s.solve(&lits(q)).is_sat(), brute_force_sat(6, &added, q));
            }
        }
    }
}
