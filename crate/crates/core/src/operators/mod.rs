//! Evolutionary operators: mating, SBX crossover, polynomial mutation, and
//! the grouping and scoring machinery behind environmental selection.
//!
//! Every operator is a pure function of its inputs and an explicit rng.

mod mating;
mod selection;
mod sorting;
mod variation;

use serde::{Deserialize, Serialize};

pub use mating::{mate, Mating};
pub use selection::{environmental_select, hv_contribution, hv_contribution_of, Candidate};
pub use sorting::{crowding_distance, fast_nondominated_sort};
pub use variation::{polynomial_mutation, sbx_combine, sbx_crossover, sbx_spread_factor, SbxOutcome};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatingStrategy {
    /// Parents drawn by binary tournaments on the previous selection's rank
    /// and fitness score.
    #[default]
    BinaryTournament,
    /// A random permutation of the population, paired off from the front.
    RandomPairing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    /// Mating pairs per generation.
    pub lambda: usize,
    pub sbx_distribution_index: f64,
    /// Standard deviation of the Gaussian noise added to each offspring
    /// variable after crossover; 0 disables it.
    pub sbx_perturbation_scale: f64,
    /// Probability that a crossover offspring is mutated.
    pub mutation_probability: f64,
    pub mutation_distribution_index: f64,
    /// `None` means `1/n`.
    pub mutation_per_variable_probability: Option<f64>,
    pub mating_strategy: MatingStrategy,
}

impl OperatorConfig {
    /// Defaults for a population of size `mu`: `lambda = mu / 2`, so a
    /// generation creates `mu` crossover offspring.
    pub fn for_population(mu: usize) -> Self {
        Self {
            lambda: mu / 2,
            sbx_distribution_index: 15.0,
            sbx_perturbation_scale: 0.0,
            mutation_probability: 0.5,
            mutation_distribution_index: 20.0,
            mutation_per_variable_probability: None,
            mating_strategy: MatingStrategy::BinaryTournament,
        }
    }

    pub fn per_variable_probability(&self, n: usize) -> f64 {
        self.mutation_per_variable_probability
            .unwrap_or(if n == 0 { 0.0 } else { 1.0 / n as f64 })
    }

    pub fn check(&self, mu: usize) -> Result<()> {
        if 2 * self.lambda > mu {
            return Err(Error::contract(format!(
                "2 * lambda = {} exceeds the population size {mu}",
                2 * self.lambda
            )));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.sbx_distribution_index) || !positive(self.mutation_distribution_index) {
            return Err(Error::contract("distribution indices must be positive"));
        }
        if !(self.sbx_perturbation_scale.is_finite() && self.sbx_perturbation_scale >= 0.0) {
            return Err(Error::contract("perturbation scale must be non-negative"));
        }
        let probability = |p: f64| (0.0..=1.0).contains(&p);
        if !probability(self.mutation_probability)
            || !self.mutation_per_variable_probability.is_none_or(probability)
        {
            return Err(Error::contract("probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = OperatorConfig::for_population(100);
        assert_eq!(c.lambda, 50);
        assert_eq!(c.per_variable_probability(12), 1.0 / 12.0);
        c.check(100).unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = OperatorConfig::for_population(10);
        c.lambda = 6;
        assert!(c.check(10).is_err());
        let mut c = OperatorConfig::for_population(10);
        c.mutation_probability = 1.5;
        assert!(c.check(10).is_err());
        let mut c = OperatorConfig::for_population(10);
        c.mutation_per_variable_probability = Some(-0.1);
        assert!(c.check(10).is_err());
        let mut c = OperatorConfig::for_population(10);
        c.sbx_distribution_index = 0.0;
        assert!(c.check(10).is_err());
    }
}
