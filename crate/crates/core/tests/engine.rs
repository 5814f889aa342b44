//! Whole-run properties: determinism, resumption and log validity.

use evotrace::engine::{resume_run, run};
use evotrace::operators::MatingStrategy;
use evotrace::{validate_run_log, Algorithm, Error, IndividualId, Origin, ProblemSpec, RunConfig};

#[test]
fn same_seed_same_bytes() {
    let config = RunConfig::new(16, 8, 21);
    let a = run(&ProblemSpec::dtlz2(3), Algorithm::SmsEmoa, &config, None).unwrap();
    let b = run(&ProblemSpec::dtlz2(3), Algorithm::SmsEmoa, &config, None).unwrap();
    assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
    let c = run(&ProblemSpec::dtlz2(3), Algorithm::SmsEmoa, &RunConfig::new(16, 8, 22), None).unwrap();
    assert_ne!(a.individuals[0].decision, c.individuals[0].decision);
}

#[test]
fn resuming_equals_running_longer() {
    let problem = ProblemSpec::zdt1();
    for algorithm in [Algorithm::Nsga2, Algorithm::SmsEmoa] {
        let short = run(&problem, algorithm, &RunConfig::new(12, 10, 4), None).unwrap();
        let full = run(&problem, algorithm, &RunConfig::new(12, 20, 4), None).unwrap();
        assert_eq!(resume_run(&short, 10).unwrap(), full);
        assert_eq!(resume_run(&short, 0).unwrap(), short);
    }
}

#[test]
fn resuming_a_corrupt_log_fails() {
    let mut log = run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(8, 3, 0), None).unwrap();
    log.generations[1].population_ids.pop();
    assert!(matches!(resume_run(&log, 1), Err(Error::InvalidLog(v)) if !v.is_empty()));
}

#[test]
fn every_generation_is_consistent() {
    let mut config = RunConfig::new(20, 15, 8);
    config.operators.lambda = 6;
    config.operators.mating_strategy = MatingStrategy::RandomPairing;
    let log = run(&ProblemSpec::dtlz1(3), Algorithm::Nsga2, &config, None).unwrap();
    assert!(validate_run_log(&log).is_empty());
    for g in &log.generations {
        assert_eq!(g.reserved_ids.len(), 20 - 12);
        assert_eq!(g.mating_pool_ids.len(), 12);
        assert_eq!(g.mating_pairs.len(), 6);
        assert_eq!(g.selection.candidate_count(), 20 + 12);
        assert_eq!(g.evaluations, 12 + g.mutation_events.len());
        for m in &g.mutation_events {
            let pre = &log.individuals[m.offspring_id.index()];
            assert_eq!(pre.death_generation, Some(g.index));
            assert_eq!(g.origin_of(m.mutant_id), Some(Origin::MutatedOffspring));
            assert!(g.selection.entry(m.offspring_id).is_none());
        }
    }
    assert_eq!(log.quality_series.len(), 15);
}

#[test]
fn validation_reports_tampering() {
    let mut log = run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(8, 4, 1), None).unwrap();
    let survivor = log.generations[3].population_ids[0];
    log.individuals[survivor.index()].death_generation = Some(2);
    assert!(!validate_run_log(&log).is_empty());

    let mut log = run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(8, 4, 1), None).unwrap();
    log.individuals[20].parent_ids = vec![IndividualId(10_000)];
    assert!(!validate_run_log(&log).is_empty());
}

#[test]
fn bad_configurations_are_rejected() {
    let problem = ProblemSpec::dtlz2(3);
    assert!(run(&problem, Algorithm::Nsga2, &RunConfig::new(1, 5, 0), None).is_err());
    let mut config = RunConfig::new(10, 5, 0);
    config.operators.lambda = 6;
    assert!(run(&problem, Algorithm::Nsga2, &config, None).is_err());
    let wrong_m = vec![evotrace::ObjectiveVector(vec![0.0, 1.0])];
    assert!(run(&problem, Algorithm::Nsga2, &RunConfig::new(10, 5, 0), Some(wrong_m)).is_err());
}
