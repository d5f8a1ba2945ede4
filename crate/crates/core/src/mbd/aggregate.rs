use crate::formula::{Clause, CnfFormula, Lit, Var, WcnfInstance};

use super::{ComponentId, Observation, SystemDescription};

/// Variable layout of the aggregated formula: selectors are shared and come first
/// (`Ab(c)` is variable `c`), then one block of system variables per observation.
#[derive(Debug, Clone, Copy)]
pub struct AggregateLayout {
    num_components: u32,
    num_system_vars: u32,
}

impl AggregateLayout {
    pub fn new(sd: &SystemDescription) -> AggregateLayout {
        AggregateLayout {
            num_components: sd.num_components() as u32,
            num_system_vars: sd.num_system_vars(),
        }
    }

    pub fn ab_var(&self, c: ComponentId) -> Var {
        Var::from_index(c.get())
    }

    fn map_var(&self, replica: u32, v: u32) -> u32 {
        if v > self.num_system_vars {
            v - self.num_system_vars
        } else {
            self.num_components + replica * self.num_system_vars + v
        }
    }

    pub fn map_lit(&self, replica: u32, l: Lit) -> Lit {
        Lit::new(Var::from_index(self.map_var(replica, l.var().index())), l.is_positive())
    }

    pub fn num_vars(&self, replicas: u32) -> u32 {
        self.num_components + replicas * self.num_system_vars
    }
}

/// Sizes of [`build_aggregate`]'s output, computed without building it.
pub fn aggregate_size(sd: &SystemDescription, observations: &[Observation]) -> (u64, u64) {
    let r = observations.len() as u64;
    let vars = sd.num_components() as u64 + r * sd.num_system_vars() as u64;
    let hard: u64 = observations.iter().map(|o| (sd.num_clauses() + o.units().len()) as u64).sum();
    (vars, hard + sd.num_components() as u64)
}

/// One renamed replica of the system per observation, sharing the abnormal
/// selectors; observation units become hard units of their replica. Soft clauses
/// are the units `¬Ab(c)`, indexed by component order.
pub fn build_aggregate(sd: &SystemDescription, observations: &[Observation]) -> WcnfInstance {
    let layout = AggregateLayout::new(sd);
    let mut hard = CnfFormula::new(layout.num_vars(observations.len() as u32));
    for (i, obs) in observations.iter().enumerate() {
        let i = i as u32;
        for c in sd.clauses() {
            hard.push(c.lits().iter().map(|&l| layout.map_lit(i, l)).collect());
        }
        for &u in obs.units() {
            hard.push(Clause::new(vec![layout.map_lit(i, u)]));
        }
    }
    let soft = sd
        .components()
        .map(|c| Clause::new(vec![layout.ab_var(c).neg()]))
        .collect();
    WcnfInstance::new(hard, soft)
}
