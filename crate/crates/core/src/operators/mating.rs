use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{MatingStrategy, OperatorConfig};
use crate::error::{Error, Result};
use crate::model::{IndividualId, SelectionRecord};

/// Output of [`mate`]: the pairs in creation order plus the split of the
/// parent population into mating pool and reserved set (both ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct Mating {
    pub pairs: Vec<(IndividualId, IndividualId)>,
    pub mating_pool: Vec<IndividualId>,
    pub reserved: Vec<IndividualId>,
}

/// Forms `lambda` pairs of distinct parents from `population`.
///
/// `context` is the selection record that produced `population`; binary
/// tournaments prefer the lower group rank, then the higher fitness score,
/// then the lower id. Individuals missing from the record rank last.
pub fn mate<R: Rng + ?Sized>(
    population: &[IndividualId],
    config: &OperatorConfig,
    context: &SelectionRecord,
    rng: &mut R,
) -> Result<Mating> {
    let mu = population.len();
    let lambda = config.lambda;
    if lambda > 0 && (2 * lambda > mu || mu < 2) {
        return Err(Error::contract(format!(
            "cannot form {lambda} pairs of distinct parents from {mu} individuals"
        )));
    }
    let mut sorted = population.to_vec();
    sorted.sort_unstable();

    let pairs: Vec<(IndividualId, IndividualId)> = match config.mating_strategy {
        MatingStrategy::RandomPairing => {
            let mut shuffled = sorted.clone();
            shuffled.shuffle(rng);
            shuffled[..2 * lambda].chunks(2).map(|c| (c[0], c[1])).collect()
        }
        MatingStrategy::BinaryTournament => {
            let standing: HashMap<IndividualId, (usize, f64)> = context
                .entries()
                .map(|(g, e)| (e.individual_id, (g.rank, e.fitness_score)))
                .collect();
            let key = |id: IndividualId| standing.get(&id).copied().unwrap_or((usize::MAX, f64::NEG_INFINITY));
            let better = |a: IndividualId, b: IndividualId| {
                let (ra, sa) = key(a);
                let (rb, sb) = key(b);
                ra < rb || (ra == rb && (sa > sb || (sa == sb && a < b)))
            };
            // The second parent is drawn from the population without the
            // first, so a dominant individual cannot stall the pairing.
            let tournament = |rng: &mut R, exclude: Option<IndividualId>| {
                let pool: Vec<IndividualId> = sorted.iter().copied().filter(|&id| Some(id) != exclude).collect();
                if pool.len() == 1 {
                    return pool[0];
                }
                let i = rng.random_range(0..pool.len());
                let mut j = rng.random_range(0..pool.len() - 1);
                if j >= i {
                    j += 1;
                }
                if better(pool[i], pool[j]) {
                    pool[i]
                } else {
                    pool[j]
                }
            };
            (0..lambda)
                .map(|_| {
                    let a = tournament(rng, None);
                    let b = tournament(rng, Some(a));
                    (a, b)
                })
                .collect()
        }
    };

    let pool: BTreeSet<IndividualId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let reserved = sorted.iter().copied().filter(|id| !pool.contains(id)).collect();
    Ok(Mating { pairs, mating_pool: pool.into_iter().collect(), reserved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SelectionEntry, SelectionGroup};
    use crate::rng::{stream, Stream};

    fn ids(n: u64) -> Vec<IndividualId> {
        (0..n).map(IndividualId).collect()
    }

    fn empty_context() -> SelectionRecord {
        SelectionRecord { prioritized: true, groups: vec![] }
    }

    fn config(lambda: usize, strategy: MatingStrategy) -> OperatorConfig {
        OperatorConfig { lambda, mating_strategy: strategy, ..OperatorConfig::for_population(4) }
    }

    #[test]
    fn full_pool_with_random_pairing() {
        let mut rng = stream(3, Stream::Mating { generation: 1 });
        let m = mate(&ids(4), &config(2, MatingStrategy::RandomPairing), &empty_context(), &mut rng).unwrap();
        assert_eq!(m.pairs.len(), 2);
        assert_eq!(m.mating_pool, ids(4));
        assert!(m.reserved.is_empty());
    }

    #[test]
    fn partition_arithmetic() {
        let mut rng = stream(3, Stream::Mating { generation: 1 });
        let m = mate(&ids(4), &config(1, MatingStrategy::RandomPairing), &empty_context(), &mut rng).unwrap();
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.reserved.len(), 2);
        assert_ne!(m.pairs[0].0, m.pairs[0].1);
    }

    #[test]
    fn zero_lambda_reserves_everyone() {
        let mut rng = stream(3, Stream::Mating { generation: 1 });
        let m = mate(&ids(4), &config(0, MatingStrategy::BinaryTournament), &empty_context(), &mut rng).unwrap();
        assert!(m.pairs.is_empty());
        assert_eq!(m.reserved, ids(4));
    }

    #[test]
    fn too_many_pairs_is_an_error() {
        let mut rng = stream(3, Stream::Mating { generation: 1 });
        assert!(mate(&ids(4), &config(3, MatingStrategy::RandomPairing), &empty_context(), &mut rng).is_err());
    }

    #[test]
    fn tournament_favours_the_first_front() {
        let entry = |id, score| SelectionEntry { individual_id: IndividualId(id), fitness_score: score, survived: true };
        let context = SelectionRecord {
            prioritized: true,
            groups: vec![
                SelectionGroup { rank: 1, members: vec![entry(0, 1.0), entry(1, 1.0)] },
                SelectionGroup { rank: 2, members: vec![entry(2, 5.0), entry(3, 5.0)] },
            ],
        };
        let mut front1 = 0usize;
        let mut front2 = 0usize;
        for trial in 0..1000 {
            let mut rng = stream(trial, Stream::Mating { generation: 1 });
            let m = mate(&ids(4), &config(1, MatingStrategy::BinaryTournament), &context, &mut rng).unwrap();
            for id in [m.pairs[0].0, m.pairs[0].1] {
                if id.0 < 2 {
                    front1 += 1;
                } else {
                    front2 += 1;
                }
            }
        }
        assert!(front1 > front2, "{front1} vs {front2}");
    }
}
