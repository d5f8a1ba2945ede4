use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{normalize_clause, Clause, Lit, Normalized, Var};

use super::MbdError;

/// Component identifier, 1-based in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(u32);

impl ComponentId {
    pub fn new(id: u32) -> ComponentId {
        assert!(id != 0, "component ids start at 1");
        ComponentId(id)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A sorted, duplicate-free set of components.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSet(Vec<ComponentId>);

pub type Diagnosis = ComponentSet;

impl ComponentSet {
    pub fn new() -> ComponentSet {
        ComponentSet(Vec::new())
    }

    pub fn from_ids(ids: impl IntoIterator<Item = u32>) -> ComponentSet {
        ids.into_iter().map(ComponentId::new).collect()
    }

    pub fn ids(&self) -> &[ComponentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: ComponentId) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ComponentId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ComponentSet) -> bool {
        self.0.iter().all(|&c| other.contains(c))
    }

    pub fn intersects(&self, other: &ComponentSet) -> bool {
        self.0.iter().any(|&c| other.contains(c))
    }

    pub fn union(&self, other: &ComponentSet) -> ComponentSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    pub fn without(&self, c: ComponentId) -> ComponentSet {
        ComponentSet(self.0.iter().copied().filter(|&x| x != c).collect())
    }

    /// Bitmask over component indices; only meaningful for fewer than 64 components.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, c| m | 1 << c.index())
    }

    pub fn from_mask(mask: u64) -> ComponentSet {
        ComponentSet::from_ids((0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1))
    }
}

impl FromIterator<ComponentId> for ComponentSet {
    fn from_iter<I: IntoIterator<Item = ComponentId>>(iter: I) -> Self {
        let set: BTreeSet<ComponentId> = iter.into_iter().collect();
        ComponentSet(set.into_iter().collect())
    }
}

impl fmt::Display for ComponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A minimal set of components that cannot all be healthy under `witness_obs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Explanation {
    pub components: ComponentSet,
    pub witness_obs: u32,
}

/// A failing test: unit assignments over system variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub id: u32,
    units: Vec<Lit>,
}

impl Observation {
    pub fn new(id: u32, units: Vec<Lit>) -> Result<Observation, MbdError> {
        let mut units = units;
        units.sort_unstable();
        units.dedup();
        if let Some(w) = units.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(MbdError::ContradictoryObservation { obs: id, var: w[0].var().index() });
        }
        Ok(Observation { id, units })
    }

    pub fn units(&self) -> &[Lit] {
        &self.units
    }
}

/// Where a generated system came from, kept so statistics can relate runs back to their family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BuggyEncoder { r: u32, k: u32 },
}

/// A system description in weak-fault-model form: each component clause is stored
/// as `original ∨ Ab(c)`, background clauses carry no selector.
///
/// System variables are `1..=num_system_vars`; the selector of component `c` is
/// variable `num_system_vars + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDescription {
    num_system_vars: u32,
    names: Vec<String>,
    clauses: Vec<Clause>,
    owners: Vec<Option<ComponentId>>,
    pub family: Option<Family>,
}

impl SystemDescription {
    pub fn num_system_vars(&self) -> u32 {
        self.num_system_vars
    }

    pub fn num_components(&self) -> usize {
        self.names.len()
    }

    /// Total variable count, selectors included.
    pub fn num_vars(&self) -> u32 {
        self.num_system_vars + self.names.len() as u32
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentId> {
        (1..=self.names.len() as u32).map(ComponentId)
    }

    pub fn all_components(&self) -> ComponentSet {
        self.components().collect()
    }

    pub fn name(&self, c: ComponentId) -> &str {
        &self.names[c.index()]
    }

    pub fn component_by_name(&self, name: &str) -> Option<ComponentId> {
        self.names.iter().position(|n| n == name).map(|i| ComponentId(i as u32 + 1))
    }

    /// The abnormal selector `Ab(c)`; true means abnormal.
    pub fn ab_lit(&self, c: ComponentId) -> Lit {
        Var::from_index(self.num_system_vars + c.0).pos()
    }

    /// Guarded clauses, in storage order.
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn owner(&self, clause_index: usize) -> Option<ComponentId> {
        self.owners[clause_index]
    }

    pub fn clause_group(&self, c: ComponentId) -> Vec<usize> {
        (0..self.clauses.len()).filter(|&i| self.owners[i] == Some(c)).collect()
    }

    pub fn hard_indices(&self) -> Vec<usize> {
        (0..self.clauses.len()).filter(|&i| self.owners[i].is_none()).collect()
    }

    /// Clause `i` without its selector literal.
    pub fn original_clause(&self, i: usize) -> Clause {
        let lits = self.clauses[i].lits();
        match self.owners[i] {
            Some(_) => Clause::new(lits[..lits.len() - 1].to_vec()),
            None => self.clauses[i].clone(),
        }
    }

    pub fn contains_component(&self, c: ComponentId) -> bool {
        c.index() < self.names.len()
    }

    pub fn check_components(&self, set: &ComponentSet) -> Result<(), MbdError> {
        match set.iter().find(|&c| !self.contains_component(c)) {
            Some(c) => Err(MbdError::UnknownComponent(c.0)),
            None => Ok(()),
        }
    }

    pub fn check_observation(&self, obs: &Observation) -> Result<(), MbdError> {
        match obs.units().iter().find(|l| l.var().index() > self.num_system_vars) {
            Some(l) => Err(MbdError::UnknownVariable { obs: obs.id, var: l.var().index() }),
            None => Ok(()),
        }
    }
}

/// Incremental construction of a [`SystemDescription`].
#[derive(Debug, Clone)]
pub struct SystemBuilder {
    num_system_vars: u32,
    names: Vec<String>,
    pending: Vec<(Option<ComponentId>, Clause)>,
    dropped_tautologies: usize,
}

impl SystemBuilder {
    pub fn new(num_system_vars: u32) -> SystemBuilder {
        SystemBuilder {
            num_system_vars,
            names: Vec::new(),
            pending: Vec::new(),
            dropped_tautologies: 0,
        }
    }

    pub fn num_system_vars(&self) -> u32 {
        self.num_system_vars
    }

    pub fn ensure_system_vars(&mut self, n: u32) {
        self.num_system_vars = self.num_system_vars.max(n);
    }

    pub fn add_component(&mut self, name: impl Into<String>) -> ComponentId {
        self.names.push(name.into());
        ComponentId(self.names.len() as u32)
    }

    pub fn num_components(&self) -> usize {
        self.names.len()
    }

    pub fn rename(&mut self, c: ComponentId, name: impl Into<String>) {
        self.names[c.index()] = name.into();
    }

    pub fn add_hard(&mut self, clause: Clause) {
        self.push(None, clause);
    }

    pub fn add_component_clause(&mut self, c: ComponentId, clause: Clause) {
        assert!(c.index() < self.names.len(), "unknown component {c}");
        self.push(Some(c), clause);
    }

    fn push(&mut self, owner: Option<ComponentId>, clause: Clause) {
        match normalize_clause(&clause) {
            Normalized::Tautology => self.dropped_tautologies += 1,
            Normalized::Clause(c) => {
                self.num_system_vars = self.num_system_vars.max(c.max_var());
                self.pending.push((owner, c));
            }
        }
    }

    pub fn dropped_tautologies(&self) -> usize {
        self.dropped_tautologies
    }

    pub fn build(self) -> SystemDescription {
        let v = self.num_system_vars;
        let (owners, clauses) = self
            .pending
            .into_iter()
            .map(|(owner, c)| {
                let guarded = match owner {
                    Some(comp) => {
                        let mut g = c;
                        g.push(Var::from_index(v + comp.0).pos());
                        g
                    }
                    None => c,
                };
                (owner, guarded)
            })
            .unzip();
        SystemDescription {
            num_system_vars: v,
            names: self.names,
            clauses,
            owners,
            family: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(v: &[i32]) -> Clause {
        Clause::from_dimacs(v).unwrap()
    }

    #[test]
    fn builder_guards_component_clauses() {
        let mut b = SystemBuilder::new(2);
        b.add_hard(cl(&[1]));
        let c = b.add_component("g");
        b.add_component_clause(c, cl(&[2, -1]));
        b.add_component_clause(c, cl(&[2, -2]));
        let sd = b.build();
        assert_eq!(sd.num_vars(), 3);
        assert_eq!(sd.clauses(), &[cl(&[1]), cl(&[-1, 2, 3])]);
        assert_eq!(sd.clause_group(c), vec![1]);
        assert_eq!(sd.hard_indices(), vec![0]);
        assert_eq!(sd.original_clause(1), cl(&[-1, 2]));
        assert_eq!(sd.ab_lit(c), Lit::from_dimacs(3).unwrap());
    }

    #[test]
    fn groups_partition_clauses() {
        let mut b = SystemBuilder::new(3);
        let a = b.add_component("a");
        let c = b.add_component("c");
        b.add_component_clause(a, cl(&[1]));
        b.add_hard(cl(&[2, 3]));
        b.add_component_clause(c, cl(&[-3]));
        b.add_component_clause(a, cl(&[2]));
        let sd = b.build();
        let mut all: Vec<usize> = sd.hard_indices();
        for comp in sd.components() {
            all.extend(sd.clause_group(comp));
        }
        all.sort();
        assert_eq!(all, (0..sd.num_clauses()).collect::<Vec<_>>());
    }

    #[test]
    fn contradictory_observation_rejected() {
        let l = |x| Lit::from_dimacs(x).unwrap();
        assert!(matches!(
            Observation::new(4, vec![l(1), l(-1)]),
            Err(MbdError::ContradictoryObservation { obs: 4, var: 1 })
        ));
        assert_eq!(Observation::new(1, vec![l(2), l(2)]).unwrap().units().len(), 1);
    }

    #[test]
    fn component_set_ops() {
        let a = ComponentSet::from_ids([3, 1, 3]);
        assert_eq!(a.ids().len(), 2);
        let b = ComponentSet::from_ids([2, 3]);
        assert!(a.intersects(&b));
        assert_eq!(a.union(&b), ComponentSet::from_ids([1, 2, 3]));
        assert!(ComponentSet::from_ids([3]).is_subset(&a));
        assert_eq!(ComponentSet::from_mask(a.to_mask()), a);
        assert_eq!(a.to_string(), "1 3");
    }
}
