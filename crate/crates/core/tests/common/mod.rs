#![allow(dead_code)]

use mbdiag_core::benchgen::{gen_random_instance, RandomParams};
use mbdiag_core::engines::{aggregated_enumerate, ihsd_enumerate, separate_enumerate, EngineConfig, IhsdReport};
use mbdiag_core::mbd::{ComponentSet, ConsistencyChecker, Diagnosis, Observation, SystemDescription};

pub fn sorted(mut sets: Vec<ComponentSet>) -> Vec<ComponentSet> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets
}

pub fn random_instance(seed: u64) -> (SystemDescription, Vec<Observation>) {
    let params = RandomParams {
        components: 3 + (seed % 8) as usize,
        vars: 4 + (seed % 5) as u32,
        observations: 1 + (seed % 3) as usize,
        seed,
    };
    gen_random_instance(&params).expect("random instance")
}

pub fn run_ihsd(sd: &SystemDescription, obs: &[Observation], config: &EngineConfig) -> (Vec<Diagnosis>, IhsdReport) {
    let mut out = Vec::new();
    let report = ihsd_enumerate(sd, obs, config, |d| out.push(d.clone())).expect("ihsd");
    (out, report)
}

pub fn run_aggregated(sd: &SystemDescription, obs: &[Observation], config: &EngineConfig) -> Vec<Diagnosis> {
    let mut out = Vec::new();
    aggregated_enumerate(sd, obs, config, |d| out.push(d.clone())).expect("aggregated");
    out
}

pub fn run_separate(sd: &SystemDescription, obs: &[Observation], config: &EngineConfig) -> Vec<Diagnosis> {
    let mut out = Vec::new();
    separate_enumerate(sd, obs, config, |d| out.push(d.clone())).expect("separate");
    out
}

/// Checks every diagnosis, every explanation, and that each diagnosis hits each explanation.
pub fn assert_invariants(sd: &SystemDescription, obs: &[Observation], diagnoses: &[Diagnosis], report: Option<&IhsdReport>) {
    let mut checker = ConsistencyChecker::new(sd);
    for d in diagnoses {
        assert!(checker.verify_diagnosis(d, obs).unwrap(), "invalid diagnosis {d}");
    }
    if let Some(report) = report {
        for e in &report.explanations {
            assert!(checker.is_minimal_explanation(e, obs).unwrap(), "non-minimal explanation {:?}", e);
            for d in diagnoses {
                assert!(d.intersects(&e.components), "diagnosis {d} misses explanation {}", e.components);
            }
        }
        let s = &report.stats;
        assert!(s.iterations >= (s.diagnoses_emitted + s.explanations_found) as u64);
    }
}
