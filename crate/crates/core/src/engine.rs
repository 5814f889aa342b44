//! The instrumented generational loop.
//!
//! Generation `k` splits `P(k-1)` into the mating pool and the reserved set,
//! creates `2 * lambda` crossover offspring, mutates a random subset of them
//! (the mutated pre-images are retired immediately and replaced by their
//! mutants), and runs environmental selection on
//! `Q(k) = R(k) ∪ MP(k) ∪ offspring`. Quality measures are taken on the
//! survivors `P(k)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::quality_point;
use crate::model::{
    validate_run_log, GenerationRecord, Individual, IndividualId, MatingPair, MutationEvent, ObjectiveVector,
    Origin, ReferenceSet, RunLog, SelectionRecord,
};
use crate::operators::{environmental_select, mate, polynomial_mutation, sbx_crossover, Candidate, OperatorConfig};
use crate::problems::ProblemSpec;
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Crowding-distance scoring within non-dominated fronts.
    #[serde(rename = "nsga2")]
    Nsga2,
    /// Hypervolume-contribution scoring within non-dominated fronts.
    #[serde(rename = "smsemoa")]
    SmsEmoa,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::SmsEmoa => "smsemoa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nsga2" | "nsgaii" => Ok(Algorithm::Nsga2),
            "smsemoa" => Ok(Algorithm::SmsEmoa),
            _ => Err(Error::contract(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mu: usize,
    pub generations: usize,
    pub operators: OperatorConfig,
    pub seed: u64,
}

impl RunConfig {
    /// Default operators for a population of `mu` (`lambda = mu / 2`).
    pub fn new(mu: usize, generations: usize, seed: u64) -> Self {
        Self { mu, generations, operators: OperatorConfig::for_population(mu), seed }
    }

    pub fn check(&self) -> Result<()> {
        if self.mu < 2 {
            return Err(Error::contract(format!("population size must be at least 2, got {}", self.mu)));
        }
        if self.generations == 0 {
            return Err(Error::contract("at least one generation is required"));
        }
        self.operators.check(self.mu)
    }
}

/// Runs `algorithm` on `problem`. Without an explicit `reference_set` the
/// problem's default reference set is used.
pub fn run(
    problem: &ProblemSpec,
    algorithm: Algorithm,
    config: &RunConfig,
    reference_set: Option<Vec<ObjectiveVector>>,
) -> Result<RunLog> {
    problem.check()?;
    config.check()?;
    let objectives = match reference_set {
        Some(set) => {
            if set.iter().any(|p| p.len() != problem.m) {
                return Err(Error::contract("reference points must have m objectives"));
            }
            set
        }
        None => problem.default_reference_set(),
    };
    let reference = ReferenceSet::from_objectives(objectives)?;

    let mut rng = stream(config.seed, Stream::Initialization);
    let decisions = problem.random_population(config.mu, &mut rng)?;
    let mut individuals = Vec::with_capacity(config.mu * (config.generations + 1) * 2);
    for (i, x) in decisions.into_iter().enumerate() {
        let objective = problem.evaluate(&x)?;
        individuals.push(Individual {
            id: IndividualId(i as u64),
            birth_generation: 0,
            death_generation: None,
            origin: None,
            parent_ids: Vec::new(),
            decision: x,
            objective,
        });
    }
    let target = config.generations;
    let mut log = RunLog {
        problem: problem.clone(),
        algorithm,
        config: RunConfig { generations: 0, ..config.clone() },
        individuals,
        generations: Vec::with_capacity(target),
        quality_series: Vec::with_capacity(target),
        reference: Some(reference),
    };
    extend(&mut log, target)?;
    Ok(log)
}

/// Continues a finished run for `extra_generations` more generations. The
/// result equals a fresh run configured with the combined length.
pub fn resume_run(log: &RunLog, extra_generations: usize) -> Result<RunLog> {
    let violations = validate_run_log(log);
    if !violations.is_empty() {
        return Err(Error::InvalidLog(violations));
    }
    let mut extended = log.clone();
    if extended.reference.is_none() {
        extended.reference = Some(ReferenceSet::from_objectives(log.problem.default_reference_set())?);
    }
    extend(&mut extended, log.config.generations + extra_generations)?;
    Ok(extended)
}

fn extend(log: &mut RunLog, target: usize) -> Result<()> {
    let start = log.generations.len() + 1;
    log.config.generations = log.generations.len();
    for k in start..=target {
        let record = step(log, k)?;
        log.generations.push(record);
        let population = log.objectives_of(&log.generations[k - 1].population_ids);
        let reference = log.reference.as_ref().expect("reference set present");
        let point = quality_point(k, &population, reference, &mut stream(log.config.seed, Stream::Measures { generation: k }))?;
        log.quality_series.push(point);
        log.config.generations = k;
    }
    Ok(())
}

fn step(log: &mut RunLog, k: usize) -> Result<GenerationRecord> {
    let mu = log.config.mu;
    let seed = log.config.seed;
    let ops = log.config.operators.clone();
    let problem = log.problem.clone();
    let algorithm = log.algorithm;
    let hv_reference = log.reference.as_ref().expect("reference set present").hv_reference_point.clone();

    let previous = log.population_at(k - 1).expect("previous generation exists");
    // The record that produced P(k-1); the initial population is scored as if
    // it had passed a selection in which everyone survives.
    let context: SelectionRecord = match k {
        1 => {
            let candidates: Vec<Candidate> = previous
                .iter()
                .map(|&id| Candidate { id, objective: &log.individuals[id.index()].objective })
                .collect();
            environmental_select(&candidates, mu, algorithm, &hv_reference)?
        }
        _ => log.generations[k - 2].selection.clone(),
    };

    let mating = mate(&previous, &ops, &context, &mut stream(seed, Stream::Mating { generation: k }))?;

    let mut pairs = Vec::with_capacity(mating.pairs.len());
    let mut offspring_ids = Vec::with_capacity(2 * mating.pairs.len());
    for &(a, b) in &mating.pairs {
        let first = IndividualId(log.individuals.len() as u64);
        let mut rng = stream(seed, Stream::Crossover { first_offspring: first });
        let outcome = sbx_crossover(
            &log.individuals[a.index()].decision,
            &log.individuals[b.index()].decision,
            &problem.bounds,
            &ops,
            &mut rng,
        );
        let magnitudes = outcome.perturbation_magnitudes();
        let mut ids = [first; 2];
        for (slot, x) in outcome.offspring.into_iter().enumerate() {
            let id = IndividualId(log.individuals.len() as u64);
            let decision = x.into();
            let objective = problem.evaluate(&decision)?;
            log.individuals.push(Individual {
                id,
                birth_generation: k,
                death_generation: None,
                origin: Some(Origin::CrossoverOffspring),
                parent_ids: vec![a, b],
                decision,
                objective,
            });
            ids[slot] = id;
            offspring_ids.push(id);
        }
        pairs.push(MatingPair {
            parent_a: a,
            parent_b: b,
            offspring: ids,
            spread_factor: outcome.beta,
            perturbation_magnitudes: magnitudes,
        });
    }

    let mut mutation_events = Vec::new();
    let mut candidates_ids: Vec<IndividualId> = mating.reserved.iter().chain(&mating.mating_pool).copied().collect();
    for &o in &offspring_ids {
        let mut rng = stream(seed, Stream::Mutation { offspring: o });
        if rng.random::<f64>() >= ops.mutation_probability {
            candidates_ids.push(o);
            continue;
        }
        let (x, delta) = polynomial_mutation(&log.individuals[o.index()].decision, &problem.bounds, &ops, &mut rng);
        let decision = x.into();
        let objective = problem.evaluate(&decision)?;
        let mutant = IndividualId(log.individuals.len() as u64);
        log.individuals.push(Individual {
            id: mutant,
            birth_generation: k,
            death_generation: None,
            origin: Some(Origin::MutatedOffspring),
            parent_ids: vec![o],
            decision,
            objective,
        });
        let pre = &mut log.individuals[o.index()];
        pre.death_generation = Some(k);
        mutation_events.push(MutationEvent {
            offspring_id: o,
            mutant_id: mutant,
            delta,
            pre_objective: pre.objective.clone(),
        });
        candidates_ids.push(mutant);
    }
    candidates_ids.sort_unstable();

    let candidates: Vec<Candidate> = candidates_ids
        .iter()
        .map(|&id| Candidate { id, objective: &log.individuals[id.index()].objective })
        .collect();
    let selection = environmental_select(&candidates, mu, algorithm, &hv_reference)?;
    for (_, entry) in selection.entries() {
        if !entry.survived {
            log.individuals[entry.individual_id.index()].death_generation = Some(k);
        }
    }
    let evaluations = 2 * pairs.len() + mutation_events.len();
    Ok(GenerationRecord {
        index: k,
        reserved_ids: mating.reserved,
        mating_pool_ids: mating.mating_pool,
        mating_pairs: pairs,
        mutation_events,
        population_ids: selection.survivors(),
        selection,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_checks() {
        let p = ProblemSpec::dtlz2(3);
        assert!(run(&p, Algorithm::Nsga2, &RunConfig::new(1, 5, 0), None).is_err());
        assert!(run(&p, Algorithm::Nsga2, &RunConfig::new(10, 0, 0), None).is_err());
    }

    #[test]
    fn one_generation() {
        let p = ProblemSpec::dtlz2(3);
        let log = run(&p, Algorithm::Nsga2, &RunConfig::new(10, 1, 3), None).unwrap();
        assert_eq!(log.generations.len(), 1);
        assert_eq!(log.initial_population().len(), 10);
        assert_eq!(validate_run_log(&log), Vec::<String>::new());
    }

    #[test]
    fn algorithm_names() {
        assert_eq!("NSGA-II".parse::<Algorithm>().unwrap(), Algorithm::Nsga2);
        assert_eq!("sms-emoa".parse::<Algorithm>().unwrap(), Algorithm::SmsEmoa);
        assert!("moead".parse::<Algorithm>().is_err());
        assert_eq!(serde_json::to_string(&Algorithm::SmsEmoa).unwrap(), "\"smsemoa\"");
    }
}
