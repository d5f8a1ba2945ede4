//! Propositional building blocks: variables, literals, clauses and CNF containers.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("malformed literal: variable index 0 is reserved")]
    ZeroVariable,
    #[error("variable {0} is not assigned")]
    Unassigned(Var),
}

/// A propositional variable. Indices are dense and start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Result<Var, FormulaError> {
        if index == 0 {
            Err(FormulaError::ZeroVariable)
        } else {
            Ok(Var(index))
        }
    }

    /// Panics on 0. For internal call sites that already hold a valid index.
    pub fn from_index(index: u32) -> Var {
        assert!(index != 0, "variable index 0 is reserved");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal packed as `2 * var + negated`. Ordering is by variable, positive first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | u32::from(!positive))
    }

    pub fn from_dimacs(value: i32) -> Result<Lit, FormulaError> {
        let var = Var::new(value.unsigned_abs())?;
        Ok(Lit::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code, used by the solver to index per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Truth value of the literal under `value` for its variable.
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var())
        } else {
            write!(f, "¬{}", self.var())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

/// Outcome of [`normalize_clause`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Clause(Clause),
    Tautology,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Clause {
        Clause { lits }
    }

    pub fn from_dimacs(values: &[i32]) -> Result<Clause, FormulaError> {
        values
            .iter()
            .map(|&v| Lit::from_dimacs(v))
            .collect::<Result<Vec<_>, _>>()
            .map(Clause::new)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.lits.iter().map(|l| l.var().index()).max().unwrap_or(0)
    }

    pub fn push(&mut self, lit: Lit) {
        self.lits.push(lit);
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> Result<bool, FormulaError> {
        for &lit in &self.lits {
            if lit.eval(assignment.value(lit.var())?) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// Sorts by variable then polarity, removes duplicates, and detects
/// complementary pairs. Literals are valid by construction, so the
/// malformed-literal case is caught earlier, in [`Lit::from_dimacs`].
pub fn normalize_clause(clause: &Clause) -> Normalized {
    let mut lits = clause.lits.clone();
    lits.sort_unstable();
    lits.dedup();
    if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
        return Normalized::Tautology;
    }
    Normalized::Clause(Clause::new(lits))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Adds a clause, growing the variable range if the clause mentions a larger index.
    pub fn push(&mut self, clause: Clause) {
        self.num_vars = self.num_vars.max(clause.max_var());
        self.clauses.push(clause);
    }

    pub fn ensure_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }
}

impl FromIterator<Clause> for CnfFormula {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        let mut f = CnfFormula::new(0);
        for c in iter {
            f.push(c);
        }
        f
    }
}

/// True iff every clause has at least one literal assigned true.
pub fn eval_formula(formula: &CnfFormula, assignment: &Assignment) -> Result<bool, FormulaError> {
    for clause in &formula.clauses {
        if !clause.is_satisfied_by(assignment)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partial MaxSAT instance. Every soft clause has weight 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WcnfInstance {
    pub hard: CnfFormula,
    pub soft: Vec<Clause>,
}

impl WcnfInstance {
    pub fn new(hard: CnfFormula, soft: Vec<Clause>) -> WcnfInstance {
        WcnfInstance { hard, soft }
    }

    /// Weight standing for ⊤: one more than the total soft weight.
    pub fn top_weight(&self) -> u64 {
        self.soft.len() as u64 + 1
    }

    pub fn num_vars(&self) -> u32 {
        self.soft
            .iter()
            .map(Clause::max_var)
            .fold(self.hard.num_vars(), u32::max)
    }

    pub fn num_clauses(&self) -> usize {
        self.hard.len() + self.soft.len()
    }
}

/// A truth assignment. Index 0 is unused; `None` means unassigned.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_values(values: &[bool]) -> Assignment {
        let mut a = Assignment {
            values: vec![None; values.len() + 1],
        };
        for (i, &v) in values.iter().enumerate() {
            a.values[i + 1] = Some(v);
        }
        a
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let i = var.index() as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.index() as usize).copied().flatten()
    }

    pub fn value(&self, var: Var) -> Result<bool, FormulaError> {
        self.get(var).ok_or(FormulaError::Unassigned(var))
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.eval(v))
    }

    /// Highest variable index covered by the backing table.
    pub fn len(&self) -> u32 {
        self.values.len().saturating_sub(1) as u32
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_total(&self, num_vars: u32) -> bool {
        (1..=num_vars).all(|v| self.get(Var(v)).is_some())
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        let mut a = Assignment::new();
        for (v, b) in iter {
            a.set(v, b);
        }
        a
    }
}
