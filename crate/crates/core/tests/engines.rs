mod common;

use std::time::Duration;

use mbdiag_core::benchgen::{gen_buggy_encoder, gen_c17, EncoderParams};
use mbdiag_core::engines::{
    aggregated_enumerate, assemble, separate_enumerate, EngineConfig, Outcome,
};
use mbdiag_core::formula::{Clause, Var};
use mbdiag_core::hitting_set::Minimality;
use mbdiag_core::mbd::oracle::brute_force_diagnoses;
use mbdiag_core::mbd::{aggregate_size, build_aggregate, ComponentId, ComponentSet, Observation, SystemBuilder};
use mbdiag_core::mcs::enumerate_mcs;
use mbdiag_core::par::Execution;

use common::{assert_invariants, random_instance, run_aggregated, run_ihsd, run_separate, sorted};

fn subset() -> EngineConfig {
    EngineConfig::with_mode(Minimality::Subset)
}

fn cardinality() -> EngineConfig {
    EngineConfig::with_mode(Minimality::Cardinality)
}

#[test]
fn encoder_single_diagnosis() {
    for (r, k) in [(2, 1), (3, 2), (10, 10), (20, 7), (50, 50)] {
        let p = EncoderParams::new(r, k);
        let (sd, obs) = gen_buggy_encoder(&p);
        let finals = ComponentSet::from_iter(p.final_components());
        for config in [subset(), cardinality()] {
            let (found, report) = run_ihsd(&sd, &obs, &config);
            assert_eq!(found, vec![finals.clone()], "r={r} k={k}");
            assert_eq!(report.stats.outcome, Outcome::Complete);
            assert_invariants(&sd, &obs, &found, Some(&report));
        }
    }
}

#[test]
fn two_shared_explanations() {
    let mut b = SystemBuilder::new(2);
    for v in 1..=2 {
        let c = b.add_component(format!("c{v}"));
        b.add_component_clause(c, Clause::new(vec![Var::from_index(v).pos()]));
    }
    let sd = b.build();
    let obs: Vec<Observation> = (1..=5)
        .map(|id| Observation::new(id, vec![Var::from_index(1).neg(), Var::from_index(2).neg()]).unwrap())
        .collect();
    let (found, report) = run_ihsd(&sd, &obs, &subset());
    assert_eq!(found, vec![ComponentSet::from_ids([1, 2])]);
    assert_eq!(report.stats.explanations_found, 2);
    // two refuted candidates, one emitted, one final exhausted query
    assert_eq!(report.stats.iterations, 4);
}

#[test]
fn single_observation_matches_oracle() {
    for seed in 0..40 {
        let (sd, obs) = random_instance(seed);
        let one = &obs[..1];
        let expected = brute_force_diagnoses(&sd, one, 15, Execution::default()).unwrap();
        let (found, report) = run_ihsd(&sd, one, &subset());
        assert_eq!(sorted(found.clone()), expected, "seed {seed}");
        assert_invariants(&sd, one, &found, Some(&report));
    }
}

#[test]
fn engines_agree_with_oracle() {
    for seed in 1000..1080 {
        let (sd, obs) = random_instance(seed);
        let expected = brute_force_diagnoses(&sd, &obs, 15, Execution::default()).unwrap();
        let (ihsd, report) = run_ihsd(&sd, &obs, &subset());
        assert_eq!(sorted(ihsd.clone()), expected, "ihsd seed {seed}");
        assert_invariants(&sd, &obs, &ihsd, Some(&report));
        assert_eq!(sorted(run_aggregated(&sd, &obs, &subset())), expected, "aggregated seed {seed}");
        assert_eq!(sorted(run_separate(&sd, &obs, &subset())), expected, "separate seed {seed}");
        for engine in 0..3 {
            let found = match engine {
                0 => run_ihsd(&sd, &obs, &cardinality()).0,
                1 => run_aggregated(&sd, &obs, &cardinality()),
                _ => run_separate(&sd, &obs, &cardinality()),
            };
            assert!(found.windows(2).all(|w| w[0].len() <= w[1].len()), "engine {engine} seed {seed}");
            assert_eq!(sorted(found), expected, "cardinality engine {engine} seed {seed}");
        }
    }
}

#[test]
fn c17_engines_agree() {
    let (sd, obs) = gen_c17();
    let expected = brute_force_diagnoses(&sd, &obs, 15, Execution::default()).unwrap();
    let (ihsd, report) = run_ihsd(&sd, &obs, &subset());
    assert_eq!(sorted(ihsd.clone()), expected);
    assert_invariants(&sd, &obs, &ihsd, Some(&report));
    assert_eq!(sorted(run_aggregated(&sd, &obs, &subset())), expected);
    assert_eq!(sorted(run_separate(&sd, &obs, &subset())), expected);
}

#[test]
fn max_diagnoses_limit() {
    let (sd, obs) = gen_c17();
    let all = brute_force_diagnoses(&sd, &obs[..1], 15, Execution::default()).unwrap();
    assert!(all.len() > 2);
    let mut config = subset();
    config.max_diagnoses = Some(2);
    let (found, report) = run_ihsd(&sd, &obs[..1], &config);
    assert_eq!(found.len(), 2);
    assert_eq!(report.stats.outcome, Outcome::LimitReached);
    let mut n = 0;
    let stats = aggregated_enumerate(&sd, &obs[..1], &config, |_| n += 1).unwrap();
    assert_eq!((n, stats.outcome), (2, Outcome::LimitReached));
}

#[test]
fn non_failing_observations_are_ignored() {
    let (sd, mut obs) = gen_c17();
    obs.push(Observation::new(99, vec![Var::from_index(1).pos()]).unwrap());
    let expected = brute_force_diagnoses(&sd, &obs, 15, Execution::default()).unwrap();
    assert_eq!(sorted(run_ihsd(&sd, &obs, &subset()).0), expected);

    let healthy = vec![Observation::new(1, vec![Var::from_index(1).pos()]).unwrap()];
    for found in [run_ihsd(&sd, &healthy, &subset()).0, run_aggregated(&sd, &healthy, &subset()), run_separate(&sd, &healthy, &subset())] {
        assert_eq!(found, vec![ComponentSet::new()]);
    }
}

#[test]
fn unfixable_observation_means_no_diagnosis() {
    let mut b = SystemBuilder::new(2);
    let c = b.add_component("c1");
    b.add_component_clause(c, Clause::new(vec![Var::from_index(2).pos()]));
    b.add_hard(Clause::new(vec![Var::from_index(1).pos()]));
    let sd = b.build();
    let obs = vec![Observation::new(1, vec![Var::from_index(1).neg()]).unwrap()];
    let (found, report) = run_ihsd(&sd, &obs, &subset());
    assert!(found.is_empty());
    assert_eq!(report.stats.outcome, Outcome::NoDiagnosis);
    let stats = aggregated_enumerate(&sd, &obs, &subset(), |_| ()).unwrap();
    assert_eq!(stats.outcome, Outcome::NoDiagnosis);
    let stats = aggregated_enumerate(&sd, &obs, &cardinality(), |_| ()).unwrap();
    assert_eq!(stats.outcome, Outcome::NoDiagnosis);
    let report = separate_enumerate(&sd, &obs, &subset(), |_| ()).unwrap();
    assert_eq!(report.stats.outcome, Outcome::NoDiagnosis);
}

#[test]
fn separate_counts_on_encoder() {
    let p = EncoderParams::new(3, 2);
    let (sd, obs) = gen_buggy_encoder(&p);
    let mut emitted = Vec::new();
    let report = separate_enumerate(&sd, &obs, &subset(), |d| emitted.push(d.clone())).unwrap();
    let counts: Vec<usize> = report.per_obs.iter().map(|o| o.diagnoses.len()).collect();
    assert_eq!(counts, vec![25, 25, 1]);
    assert!(report.all_exhausted());
    for (o, entry) in obs.iter().zip(&report.per_obs) {
        let oracle = brute_force_diagnoses(&sd, std::slice::from_ref(o), 15, Execution::default()).unwrap();
        assert_eq!(sorted(entry.diagnoses.clone()), oracle);
    }
    let finals = ComponentSet::from_iter(p.final_components());
    assert_eq!(emitted, vec![finals.clone()]);
    let per: Vec<Vec<ComponentSet>> = report.per_obs.iter().map(|o| o.diagnoses.clone()).collect();
    assert_eq!(assemble(&per), vec![finals]);

    let (sd3, obs3) = gen_buggy_encoder(&EncoderParams::new(2, 3));
    let report = separate_enumerate(&sd3, &obs3[..1], &subset(), |_| ()).unwrap();
    assert_eq!(report.per_obs[0].diagnoses.len(), 85);
}

#[test]
fn separate_budget_is_reported() {
    let (sd, obs) = gen_buggy_encoder(&EncoderParams::new(3, 9));
    let mut config = subset();
    config.time_budget = Some(Duration::from_millis(200));
    let mut emitted = 0;
    let report = separate_enumerate(&sd, &obs, &config, |_| emitted += 1).unwrap();
    assert!(!report.per_obs[0].exhausted);
    assert_eq!(report.stats.outcome, Outcome::BudgetExhausted);
    assert_eq!(emitted, 0);
}

#[test]
fn execution_modes_agree() {
    let (sd, obs) = gen_buggy_encoder(&EncoderParams::new(4, 2));
    let mut seq = subset();
    seq.execution = Execution::Sequential;
    let mut par = subset();
    par.execution = Execution::Parallel;
    let a = separate_enumerate(&sd, &obs, &seq, |_| ()).unwrap();
    let b = separate_enumerate(&sd, &obs, &par, |_| ()).unwrap();
    assert_eq!(a.per_obs, b.per_obs);
}

#[test]
fn aggregated_single_observation_is_mcs_enumeration() {
    for seed in 300..330 {
        let (sd, obs) = random_instance(seed);
        let one = &obs[..1];
        let mut direct = Vec::new();
        enumerate_mcs(&build_aggregate(&sd, one), None, |res| {
            direct.push(res.mcs.iter().map(|&i| ComponentId::new(i as u32 + 1)).collect::<ComponentSet>());
            true
        });
        assert_eq!(sorted(run_aggregated(&sd, one, &subset())), sorted(direct), "seed {seed}");
    }
}

#[test]
fn aggregated_matches_ihsd_on_encoder() {
    let p = EncoderParams::new(10, 10);
    let (sd, obs) = gen_buggy_encoder(&p);
    let finals = ComponentSet::from_iter(p.final_components());
    assert_eq!(run_aggregated(&sd, &obs, &subset()), vec![finals.clone()]);
    assert_eq!(run_aggregated(&sd, &obs, &cardinality()), vec![finals.clone()]);
    assert_eq!(run_ihsd(&sd, &obs, &subset()).0, vec![finals]);
}

#[test]
fn large_aggregate_size() {
    let (sd, obs) = gen_buggy_encoder(&EncoderParams::new(500, 2000));
    let (vars, _) = aggregate_size(&sd, &obs);
    assert!(vars >= 3_000_000, "{vars}");
}

#[test]
fn explanation_cap_stops_early() {
    let (sd, obs) = gen_buggy_encoder(&EncoderParams::new(10, 10));
    let mut config = subset();
    config.max_explanations = Some(1);
    let (found, report) = run_ihsd(&sd, &obs, &config);
    assert!(found.is_empty());
    assert_eq!(report.stats.explanations_found, 1);
    assert_eq!(report.stats.outcome, Outcome::BudgetExhausted);
}
