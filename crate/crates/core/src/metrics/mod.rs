//! Quality measures over populations (IGD, HV, SP, MS), individual-level
//! distances, and four-origin statistics of each generation.
//!
//! IGD is the standard inverted form: the mean, over reference points, of
//! the distance to the nearest population member. SP is Schott's spacing
//! with city-block nearest-neighbour distances. MS is the Euclidean norm of
//! the per-objective ranges.

mod hypervolume;

use serde::{Deserialize, Serialize};

pub use hypervolume::{hypervolume, hypervolume_exact, hypervolume_monte_carlo, HypervolumeEstimate, MONTE_CARLO_SAMPLES};

use crate::error::{Error, Result};
use crate::model::{GenerationRecord, IndividualId, ObjectiveVector, Origin, QualityPoint, ReferenceSet};
use crate::rng::StreamRng;

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn city_block(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Inverted generational distance of `population` w.r.t. `reference`.
pub fn igd<P: AsRef<[f64]>, R: AsRef<[f64]>>(population: &[P], reference: &[R]) -> Result<f64> {
    if population.is_empty() || reference.is_empty() {
        return Err(Error::contract("igd needs a non-empty population and reference set"));
    }
    let total: f64 = reference
        .iter()
        .map(|r| nearest_distance(r.as_ref(), population))
        .sum();
    Ok(total / reference.len() as f64)
}

fn nearest_distance<P: AsRef<[f64]>>(point: &[f64], set: &[P]) -> f64 {
    set.iter()
        .map(|q| euclidean(point, q.as_ref()))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacing {
    pub value: f64,
    /// Set when fewer than two points make the measure undefined; `value` is
    /// then reported as 0.
    pub degenerate: bool,
}

pub fn spacing<P: AsRef<[f64]>>(population: &[P]) -> Spacing {
    let n = population.len();
    if n < 2 {
        return Spacing { value: 0.0, degenerate: true };
    }
    let d: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| city_block(population[i].as_ref(), population[j].as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|x| (mean - x).powi(2)).sum::<f64>() / (n - 1) as f64;
    Spacing { value: var.sqrt(), degenerate: false }
}

fn ranges<P: AsRef<[f64]>>(points: &[P]) -> Vec<(f64, f64)> {
    let m = points.first().map_or(0, |p| p.as_ref().len());
    (0..m)
        .map(|j| {
            points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                let v = p.as_ref()[j];
                (lo.min(v), hi.max(v))
            })
        })
        .collect()
}

/// `sqrt(sum_j (max_j - min_j)^2)`; zero for an empty set.
pub fn maximum_spread<P: AsRef<[f64]>>(population: &[P]) -> f64 {
    ranges(population)
        .into_iter()
        .map(|(lo, hi)| (hi - lo).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Maximum spread with every range divided by the reference set's range on
/// that objective (objectives with a flat reference range are skipped).
pub fn maximum_spread_normalized<P: AsRef<[f64]>, R: AsRef<[f64]>>(population: &[P], reference: &[R]) -> f64 {
    ranges(population)
        .into_iter()
        .zip(ranges(reference))
        .filter(|(_, (rlo, rhi))| rhi > rlo)
        .map(|((lo, hi), (rlo, rhi))| ((hi - lo) / (rhi - rlo)).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn nearest_reference_distance<R: AsRef<[f64]>>(objective: &[f64], reference: &[R]) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::contract("reference set is empty"));
    }
    Ok(nearest_distance(objective, reference))
}

/// Which vectors [`nearest_neighbor_distance`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Objective,
    Decision,
}

/// Distance from `points[index]` to the closest other member; `+inf` for a
/// singleton.
pub fn nearest_neighbor_distance<P: AsRef<[f64]>>(index: usize, points: &[P]) -> f64 {
    let me = points[index].as_ref();
    points
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .map(|(_, q)| euclidean(me, q.as_ref()))
        .fold(f64::INFINITY, f64::min)
}

/// Nearest-neighbour distance of the individual `id` within `population`,
/// measured in the chosen space.
pub fn nearest_neighbor_distance_of(
    id: IndividualId,
    population: &[&crate::model::Individual],
    space: Space,
) -> Result<f64> {
    let index = population
        .iter()
        .position(|i| i.id == id)
        .ok_or(Error::NotFound(id))?;
    let vectors: Vec<&[f64]> = population
        .iter()
        .map(|i| match space {
            Space::Objective => i.objective.as_slice(),
            Space::Decision => i.decision.as_slice(),
        })
        .collect();
    Ok(nearest_neighbor_distance(index, &vectors))
}

/// All four measures for one population.
pub fn quality_point(
    generation: usize,
    population: &[ObjectiveVector],
    reference: &ReferenceSet,
    rng: &mut StreamRng,
) -> Result<QualityPoint> {
    Ok(QualityPoint {
        generation,
        igd: igd(population, &reference.objectives)?,
        hv: hypervolume(population, &reference.hv_reference_point, rng).value,
        sp: spacing(population).value,
        ms: maximum_spread(population),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalCount {
    pub survived: usize,
    pub died: usize,
}

impl SurvivalCount {
    pub fn total(&self) -> usize {
        self.survived + self.died
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginStatistics {
    pub generation: usize,
    pub reserved: SurvivalCount,
    pub mating_pool: SurvivalCount,
    pub crossover_offspring: SurvivalCount,
    pub mutated_offspring: SurvivalCount,
}

impl OriginStatistics {
    pub fn get(&self, origin: Origin) -> SurvivalCount {
        match origin {
            Origin::Reserved => self.reserved,
            Origin::MatingPool => self.mating_pool,
            Origin::CrossoverOffspring => self.crossover_offspring,
            Origin::MutatedOffspring => self.mutated_offspring,
        }
    }

    fn get_mut(&mut self, origin: Origin) -> &mut SurvivalCount {
        match origin {
            Origin::Reserved => &mut self.reserved,
            Origin::MatingPool => &mut self.mating_pool,
            Origin::CrossoverOffspring => &mut self.crossover_offspring,
            Origin::MutatedOffspring => &mut self.mutated_offspring,
        }
    }

    pub fn total_survived(&self) -> usize {
        Origin::ALL.iter().map(|&o| self.get(o).survived).sum()
    }

    pub fn total(&self) -> usize {
        Origin::ALL.iter().map(|&o| self.get(o).total()).sum()
    }
}

/// Counts of each origin in `Q(k)`, split by survival.
pub fn origin_statistics(record: &GenerationRecord) -> OriginStatistics {
    let origins = record.origin_map();
    let mut stats = OriginStatistics {
        generation: record.index,
        reserved: SurvivalCount::default(),
        mating_pool: SurvivalCount::default(),
        crossover_offspring: SurvivalCount::default(),
        mutated_offspring: SurvivalCount::default(),
    };
    for (_, entry) in record.selection.entries() {
        if let Some(&origin) = origins.get(&entry.individual_id) {
            let slot = stats.get_mut(origin);
            if entry.survived {
                slot.survived += 1;
            } else {
                slot.died += 1;
            }
        }
    }
    stats
}
