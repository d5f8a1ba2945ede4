//! Exhaustive reference computations for small systems. Satisfiability here goes
//! through a standalone DPLL routine so results stay independent of the CDCL solver.

use crate::par::{self, Execution};

use super::{ComponentSet, MbdError, Observation, SystemDescription};

pub const DEFAULT_CAP: usize = 15;

/// Plain DPLL with unit propagation over DIMACS-style clauses.
pub fn dpll_satisfiable(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    let mut assign = vec![0i8; num_vars + 1];
    dpll(clauses, &mut assign)
}

fn lit_val(assign: &[i8], l: i32) -> i8 {
    let v = assign[l.unsigned_abs() as usize];
    if l > 0 {
        v
    } else {
        -v
    }
}

fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut count = 0;
            let mut satisfied = false;
            for &l in c {
                match lit_val(assign, l) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        count += 1;
                        unassigned = Some(l);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match (count, unassigned) {
                (0, _) => {
                    for v in trail {
                        assign[v] = 0;
                    }
                    return false;
                }
                (1, Some(l)) => {
                    let v = l.unsigned_abs() as usize;
                    assign[v] = if l > 0 { 1 } else { -1 };
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| lit_val(assign, l) == 1))
        .flat_map(|c| c.iter())
        .find(|&&l| lit_val(assign, l) == 0)
        .copied();
    let result = match branch {
        None => true,
        Some(l) => {
            let v = l.unsigned_abs() as usize;
            let mut found = false;
            for value in [1i8, -1] {
                assign[v] = value;
                if dpll(clauses, assign) {
                    found = true;
                    break;
                }
                assign[v] = 0;
            }
            found
        }
    };
    if !result {
        for v in trail {
            assign[v] = 0;
        }
    }
    result
}

/// Consistency of `obs` with the components in `abnormal_mask` abnormal and the rest healthy.
pub fn consistent_with_mask(sd: &SystemDescription, obs: &Observation, abnormal_mask: u64) -> bool {
    let mut clauses: Vec<Vec<i32>> = Vec::with_capacity(sd.num_clauses() + obs.units().len());
    for i in 0..sd.num_clauses() {
        if let Some(c) = sd.owner(i) {
            if abnormal_mask >> c.index() & 1 == 1 {
                continue;
            }
        }
        clauses.push(sd.original_clause(i).lits().iter().map(|l| l.to_dimacs()).collect());
    }
    for u in obs.units() {
        clauses.push(vec![u.to_dimacs()]);
    }
    dpll_satisfiable(sd.num_system_vars() as usize, &clauses)
}

fn check_cap(sd: &SystemDescription, cap: usize) -> Result<usize, MbdError> {
    let m = sd.num_components();
    if m > cap || m >= 63 {
        return Err(MbdError::CapExceeded { components: m, cap });
    }
    Ok(m)
}

/// Subset-minimal members of a down-closed-or-not family given by `member[mask]`.
fn minimal_masks(m: usize, member: &[bool]) -> Vec<u64> {
    // has_sub[mask]: some subset of mask (itself included) is a member
    let mut has_sub = member.to_vec();
    for bit in 0..m {
        for mask in 0..member.len() {
            if mask >> bit & 1 == 1 && has_sub[mask ^ 1 << bit] {
                has_sub[mask] = true;
            }
        }
    }
    (0..member.len() as u64)
        .filter(|&mask| member[mask as usize] && (0..m).all(|b| mask >> b & 1 == 0 || !has_sub[(mask ^ 1 << b) as usize]))
        .collect()
}

fn sorted_sets(masks: Vec<u64>) -> Vec<ComponentSet> {
    let mut sets: Vec<ComponentSet> = masks.into_iter().map(ComponentSet::from_mask).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets
}

/// All subset-minimal diagnoses by enumerating every component subset.
pub fn brute_force_diagnoses(
    sd: &SystemDescription,
    observations: &[Observation],
    cap: usize,
    exec: Execution,
) -> Result<Vec<ComponentSet>, MbdError> {
    let m = check_cap(sd, cap)?;
    for o in observations {
        sd.check_observation(o)?;
    }
    let consistent = par::map_range(exec, 0..1u64 << m, |mask| {
        observations.iter().all(|o| consistent_with_mask(sd, o, mask))
    });
    Ok(sorted_sets(minimal_masks(m, &consistent)))
}

/// All subset-minimal explanations: component sets that cannot all be healthy for
/// at least one observation, minimised over the union of observations.
pub fn brute_force_explanations(
    sd: &SystemDescription,
    observations: &[Observation],
    cap: usize,
    exec: Execution,
) -> Result<Vec<ComponentSet>, MbdError> {
    let m = check_cap(sd, cap)?;
    let full = (1u64 << m) - 1;
    let conflict = par::map_range(exec, 0..1u64 << m, |healthy| {
        observations.iter().any(|o| !consistent_with_mask(sd, o, full & !healthy))
    });
    Ok(sorted_sets(minimal_masks(m, &conflict)))
}

/// All subset-minimal hitting sets of `sets` over components `1..=m`.
pub fn brute_force_minimal_hitting_sets(m: usize, sets: &[ComponentSet]) -> Vec<ComponentSet> {
    let masks: Vec<u64> = sets.iter().map(ComponentSet::to_mask).collect();
    let hits: Vec<bool> = (0..1u64 << m).map(|h| masks.iter().all(|s| s & h != 0)).collect();
    sorted_sets(minimal_masks(m, &hits))
}

/// Smallest size of a set over `1..=m` hitting every member of `sets` and equal to
/// no member of `blocked`, or `None` when no such set exists.
pub fn brute_force_min_hitting_size(m: usize, sets: &[ComponentSet], blocked: &[ComponentSet]) -> Option<usize> {
    let masks: Vec<u64> = sets.iter().map(ComponentSet::to_mask).collect();
    let blocked: Vec<u64> = blocked.iter().map(ComponentSet::to_mask).collect();
    (0..1u64 << m)
        .filter(|h| masks.iter().all(|s| s & h != 0) && !blocked.iter().any(|b| b & h == *b))
        .map(|h| h.count_ones() as usize)
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dpll_basics() {
        assert!(dpll_satisfiable(0, &[]));
        assert!(!dpll_satisfiable(1, &[vec![1], vec![-1]]));
        assert!(dpll_satisfiable(2, &[vec![1, 2], vec![-1], vec![2]]));
        assert!(!dpll_satisfiable(0, &[vec![]]));
        // all 8 clauses over 3 vars: unsat
        let all: Vec<Vec<i32>> = (0..8)
            .map(|m| (1..=3).map(|v| if m >> (v - 1) & 1 == 1 { v } else { -v }).collect())
            .collect();
        assert!(!dpll_satisfiable(3, &all));
        assert!(dpll_satisfiable(3, &all[..7]));
    }

    #[test]
    fn minimal_hitting_sets_small() {
        let sets = vec![ComponentSet::from_ids([1, 2]), ComponentSet::from_ids([2, 3])];
        let hs = brute_force_minimal_hitting_sets(3, &sets);
        assert_eq!(hs, vec![ComponentSet::from_ids([2]), ComponentSet::from_ids([1, 3])]);
        let blocked = vec![ComponentSet::from_ids([2])];
        assert_eq!(brute_force_min_hitting_size(3, &sets, &blocked), Some(2));
        assert_eq!(brute_force_min_hitting_size(1, &[ComponentSet::from_ids([1])], &[ComponentSet::from_ids([1])]), None);
    }
}
