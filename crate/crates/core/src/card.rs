//! Sequential-counter encoding of `sum(lits) <= bound`, switchable per bound
//! through activation literals so one incremental solver can tighten or relax it.

use crate::formula::{Clause, Lit, Var};
use crate::sat::Solver;

/// Clauses of the sequential counter for `sum(lits) <= bound`, each extended with
/// `¬guard` when a guard is given. `fresh` allocates register variables.
pub fn encode_at_most(lits: &[Lit], bound: usize, guard: Option<Lit>, mut fresh: impl FnMut() -> Var) -> Vec<Clause> {
    let n = lits.len();
    let mut out = Vec::new();
    let mut emit = |mut c: Vec<Lit>| {
        if let Some(g) = guard {
            c.push(!g);
        }
        out.push(Clause::new(c));
    };
    if bound >= n {
        return Vec::new();
    }
    if bound == 0 {
        for &x in lits {
            emit(vec![!x]);
        }
        return out;
    }
    // regs[i][j]: at least j+1 of lits[0..=i] are true
    let regs: Vec<Vec<Lit>> = (0..n - 1).map(|_| (0..bound).map(|_| fresh().pos()).collect()).collect();
    emit(vec![!lits[0], regs[0][0]]);
    for j in 1..bound {
        emit(vec![!regs[0][j]]);
    }
    for i in 1..n - 1 {
        emit(vec![!lits[i], regs[i][0]]);
        emit(vec![!regs[i - 1][0], regs[i][0]]);
        for j in 1..bound {
            emit(vec![!lits[i], !regs[i - 1][j - 1], regs[i][j]]);
            emit(vec![!regs[i - 1][j], regs[i][j]]);
        }
        emit(vec![!lits[i], !regs[i - 1][bound - 1]]);
    }
    emit(vec![!lits[n - 1], !regs[n - 2][bound - 1]]);
    out
}

/// An at-most constraint over a fixed literal set living inside a solver.
#[derive(Debug, Clone)]
pub struct AtMost {
    lits: Vec<Lit>,
    active: Option<(usize, Lit)>,
}

impl AtMost {
    pub fn new(lits: Vec<Lit>) -> AtMost {
        AtMost { lits, active: None }
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Returns the literal to assume for `sum <= bound`, or `None` when the bound
    /// is vacuous. Encodings for other bounds are retired permanently.
    pub fn activate(&mut self, solver: &mut Solver, bound: usize) -> Option<Lit> {
        if bound >= self.lits.len() {
            return None;
        }
        if let Some((b, act)) = self.active {
            if b == bound {
                return Some(act);
            }
            solver.add_clause(&[!act]);
        }
        let act = solver.new_var().pos();
        for c in encode_at_most(&self.lits, bound, Some(act), || solver.new_var()) {
            solver.add(&c);
        }
        self.active = Some((bound, act));
        Some(act)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::SatResult;

    /// For every assignment of the inputs, the encoding is satisfiable iff the count is within bound.
    #[test]
    fn exhaustive_small_counters() {
        for n in 1..=6u32 {
            for bound in 0..=n as usize {
                for mask in 0u32..1 << n {
                    let mut s = Solver::new();
                    s.ensure_vars(n);
                    let lits: Vec<Lit> = (1..=n).map(|v| Var::from_index(v).pos()).collect();
                    let mut next = n;
                    let clauses = encode_at_most(&lits, bound, None, || {
                        next += 1;
                        Var::from_index(next)
                    });
                    for c in &clauses {
                        s.add(c);
                    }
                    let assumptions: Vec<Lit> = (0..n)
                        .map(|i| Lit::new(Var::from_index(i + 1), mask >> i & 1 == 1))
                        .collect();
                    let sat = s.solve(&assumptions).is_sat();
                    assert_eq!(sat, mask.count_ones() as usize <= bound, "n={n} b={bound} mask={mask:b}");
                }
            }
        }
    }

    #[test]
    fn activation_switches_bounds() {
        let mut s = Solver::new();
        let lits: Vec<Lit> = (0..5).map(|_| s.new_var().pos()).collect();
        s.add_clause(&lits[..3]);
        s.add_clause(&lits[3..]);
        let mut am = AtMost::new(lits.clone());
        let a1 = am.activate(&mut s, 1).unwrap();
        assert!(matches!(s.solve(&[a1]), SatResult::Unsat(_)));
        let a2 = am.activate(&mut s, 2).unwrap();
        match s.solve(&[a2]) {
            SatResult::Sat(m) => {
                let count = lits.iter().filter(|&&l| m.lit_value(l) == Some(true)).count();
                assert_eq!(count, 2);
            }
            _ => panic!("bound 2 is feasible"),
        }
        assert_eq!(am.activate(&mut s, 5), None);
    }
}
