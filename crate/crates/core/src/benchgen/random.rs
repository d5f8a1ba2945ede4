use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Clause, Lit, Var};
use crate::mbd::oracle::consistent_with_mask;
use crate::mbd::{Observation, SystemBuilder, SystemDescription};

use super::BenchgenError;

pub const MAX_RANDOM_COMPONENTS: usize = 12;
pub const MAX_RANDOM_OBSERVATIONS: usize = 4;
const ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub components: usize,
    pub vars: u32,
    pub observations: usize,
    pub seed: u64,
}

fn random_clause(rng: &mut ChaCha8Rng, vars: u32) -> Clause {
    let width = rng.gen_range(2..=3).min(vars as usize);
    let mut pool: Vec<u32> = (1..=vars).collect();
    pool.shuffle(rng);
    pool[..width]
        .iter()
        .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5)))
        .collect()
}

fn candidate(rng: &mut ChaCha8Rng, p: &RandomParams) -> (SystemDescription, Vec<Observation>) {
    let mut b = SystemBuilder::new(p.vars);
    for i in 0..p.components {
        let c = b.add_component(format!("c{}", i + 1));
        for _ in 0..rng.gen_range(1..=3) {
            b.add_component_clause(c, random_clause(rng, p.vars));
        }
    }
    if rng.gen_bool(0.3) {
        b.add_hard(random_clause(rng, p.vars));
    }
    let observations = (1..=p.observations as u32)
        .map(|id| {
            let mut units = Vec::new();
            for v in 1..=p.vars {
                if rng.gen_bool(0.6) {
                    units.push(Lit::new(Var::from_index(v), rng.gen_bool(0.5)));
                }
            }
            Observation::new(id, units).expect("one literal per variable")
        })
        .collect();
    (b.build(), observations)
}

/// Small random system whose observations all fail with every component healthy
/// and are all explained by declaring every component abnormal.
pub fn gen_random_instance(params: &RandomParams) -> Result<(SystemDescription, Vec<Observation>), BenchgenError> {
    if params.components == 0
        || params.components > MAX_RANDOM_COMPONENTS
        || params.observations == 0
        || params.observations > MAX_RANDOM_OBSERVATIONS
        || params.vars < 2
    {
        return Err(BenchgenError::InvalidParams(format!("{params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let all = (1u64 << params.components) - 1;
    for _ in 0..ATTEMPTS {
        let (sd, obs) = candidate(&mut rng, params);
        let accepted = obs.iter().all(|o| !consistent_with_mask(&sd, o, 0) && consistent_with_mask(&sd, o, all));
        if accepted {
            return Ok((sd, obs));
        }
    }
    Err(BenchgenError::GaveUp { attempts: ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        for seed in 0..20 {
            let p = RandomParams {
                components: 1 + (seed as usize % 10),
                vars: 4 + (seed as u32 % 4),
                observations: 1 + (seed as usize % 3),
                seed,
            };
            let a = gen_random_instance(&p).unwrap();
            let b = gen_random_instance(&p).unwrap();
            assert_eq!(a, b);
            let all = (1u64 << p.components) - 1;
            for o in &a.1 {
                assert!(!consistent_with_mask(&a.0, o, 0));
                assert!(consistent_with_mask(&a.0, o, all));
            }
        }
    }

    #[test]
    fn bounds_enforced() {
        let p = RandomParams {
            components: 13,
            vars: 5,
            observations: 1,
            seed: 0,
        };
        assert!(matches!(gen_random_instance(&p), Err(BenchgenError::InvalidParams(_))));
    }
}
