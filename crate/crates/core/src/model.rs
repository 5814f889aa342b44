//! Domain types shared by every module: individuals and their provenance,
//! per-generation operator traces, selection records and the run log.
//!
//! Generation `0` is the random initial population; generations `1..=G` each
//! carry a [`GenerationRecord`]. Ids are assigned run-wide in creation order,
//! so the initial population holds ids `0..mu`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{Algorithm, RunConfig};
use crate::error::{Error, Result};
use crate::problems::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndividualId(pub u64);

impl IndividualId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for IndividualId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

macro_rules! vector_impls {
    ($ty:ident) => {
        impl $ty {
            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }
        }

        impl std::ops::Deref for $ty {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl AsRef<[f64]> for $ty {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }

        impl From<Vec<f64>> for $ty {
            fn from(v: Vec<f64>) -> Self {
                $ty(v)
            }
        }
    };
}

vector_impls!(DecisionVector);
vector_impls!(ObjectiveVector);

/// Role an individual plays in one generation's joint pool `Q(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Reserved,
    MatingPool,
    CrossoverOffspring,
    MutatedOffspring,
}

impl Origin {
    pub const ALL: [Origin; 4] = [
        Origin::Reserved,
        Origin::MatingPool,
        Origin::CrossoverOffspring,
        Origin::MutatedOffspring,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Reserved => "reserved",
            Origin::MatingPool => "mating_pool",
            Origin::CrossoverOffspring => "crossover_offspring",
            Origin::MutatedOffspring => "mutated_offspring",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub id: IndividualId,
    pub birth_generation: usize,
    /// Generation whose environmental selection the individual failed.
    /// Crossover offspring that were mutated never enter the joint pool and
    /// are marked dead in their birth generation.
    pub death_generation: Option<usize>,
    /// How the individual was created; `None` for the initial population.
    pub origin: Option<Origin>,
    /// Empty for the initial population, two ids for crossover offspring, one
    /// id (the crossover pre-image) for mutated offspring.
    pub parent_ids: Vec<IndividualId>,
    pub decision: DecisionVector,
    pub objective: ObjectiveVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatingPair {
    pub parent_a: IndividualId,
    pub parent_b: IndividualId,
    pub offspring: [IndividualId; 2],
    /// SBX spread factor shared by every variable of the pair.
    pub spread_factor: f64,
    /// L2 norms of the post-crossover perturbation of each offspring.
    pub perturbation_magnitudes: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationEvent {
    pub offspring_id: IndividualId,
    pub mutant_id: IndividualId,
    /// `x_mutant - x_offspring`.
    pub delta: Vec<f64>,
    pub pre_objective: ObjectiveVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionEntry {
    pub individual_id: IndividualId,
    #[serde(with = "crate::float_serde")]
    pub fitness_score: f64,
    pub survived: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionGroup {
    /// 1-based priority rank; meaningless when the record is not prioritized.
    pub rank: usize,
    /// Sorted by fitness score descending, ties by ascending id.
    pub members: Vec<SelectionEntry>,
}

impl SelectionGroup {
    pub fn survivor_count(&self) -> usize {
        self.members.iter().filter(|e| e.survived).count()
    }
}

/// Two-level abstraction of environmental selection: candidates are grouped
/// (optionally in priority order), scored within their group, and flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub prioritized: bool,
    pub groups: Vec<SelectionGroup>,
}

impl SelectionRecord {
    pub fn entries(&self) -> impl Iterator<Item = (&SelectionGroup, &SelectionEntry)> {
        self.groups
            .iter()
            .flat_map(|g| g.members.iter().map(move |e| (g, e)))
    }

    pub fn candidate_count(&self) -> usize {
        self.groups.iter().map(|g| g.members.len()).sum()
    }

    pub fn survivor_count(&self) -> usize {
        self.groups.iter().map(SelectionGroup::survivor_count).sum()
    }

    pub fn survivors(&self) -> Vec<IndividualId> {
        let mut ids: Vec<_> = self
            .entries()
            .filter(|(_, e)| e.survived)
            .map(|(_, e)| e.individual_id)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn entry(&self, id: IndividualId) -> Option<(&SelectionGroup, &SelectionEntry)> {
        self.entries().find(|(_, e)| e.individual_id == id)
    }

    /// Checks survivor count, priority monotonicity and within-group score
    /// ordering (ties resolved in favour of the lower id).
    pub fn violations(&self, mu: usize) -> Vec<String> {
        let mut out = Vec::new();
        let survivors = self.survivor_count();
        if survivors != mu {
            out.push(format!("selection marks {survivors} survivors, expected {mu}"));
        }
        if self.prioritized {
            let mut seen_incomplete = false;
            for group in &self.groups {
                let s = group.survivor_count();
                if seen_incomplete && s > 0 {
                    out.push(format!(
                        "group rank {} has survivors although a higher-priority group lost members",
                        group.rank
                    ));
                }
                if s < group.members.len() {
                    seen_incomplete = true;
                }
            }
            for pair in self.groups.windows(2) {
                if pair[1].rank <= pair[0].rank {
                    out.push(format!("group ranks not increasing: {} then {}", pair[0].rank, pair[1].rank));
                }
            }
        }
        for group in &self.groups {
            let dead: Vec<_> = group.members.iter().filter(|e| !e.survived).collect();
            for alive in group.members.iter().filter(|e| e.survived) {
                for d in &dead {
                    let ordered = alive.fitness_score > d.fitness_score
                        || (alive.fitness_score == d.fitness_score && alive.individual_id < d.individual_id);
                    if !ordered {
                        out.push(format!(
                            "group rank {}: survivor {} (score {}) does not outrank non-survivor {} (score {})",
                            group.rank, alive.individual_id, alive.fitness_score, d.individual_id, d.fitness_score
                        ));
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        for (_, e) in self.entries() {
            if !seen.insert(e.individual_id) {
                out.push(format!("candidate {} appears twice", e.individual_id));
            }
        }
        out
    }
}

/// One iteration's full operator trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub index: usize,
    pub reserved_ids: Vec<IndividualId>,
    pub mating_pool_ids: Vec<IndividualId>,
    pub mating_pairs: Vec<MatingPair>,
    pub mutation_events: Vec<MutationEvent>,
    pub selection: SelectionRecord,
    /// The survivors `P(k)`, ascending by id.
    pub population_ids: Vec<IndividualId>,
    /// Objective evaluations spent in this generation.
    pub evaluations: usize,
}

impl GenerationRecord {
    /// Crossover offspring in creation order (two per pair).
    pub fn offspring_ids(&self) -> impl Iterator<Item = IndividualId> + '_ {
        self.mating_pairs.iter().flat_map(|p| p.offspring)
    }

    /// Origin of `id` within this generation's joint pool, if it belongs to it.
    pub fn origin_of(&self, id: IndividualId) -> Option<Origin> {
        if self.reserved_ids.contains(&id) {
            Some(Origin::Reserved)
        } else if self.mating_pool_ids.contains(&id) {
            Some(Origin::MatingPool)
        } else if self.mutation_events.iter().any(|m| m.mutant_id == id) {
            Some(Origin::MutatedOffspring)
        } else if self.mutation_events.iter().any(|m| m.offspring_id == id) {
            None
        } else if self.offspring_ids().any(|o| o == id) {
            Some(Origin::CrossoverOffspring)
        } else {
            None
        }
    }

    /// Map from every candidate of `Q(k)` to its origin.
    pub fn origin_map(&self) -> HashMap<IndividualId, Origin> {
        let mut map = HashMap::with_capacity(self.selection.candidate_count());
        for &id in &self.reserved_ids {
            map.insert(id, Origin::Reserved);
        }
        for &id in &self.mating_pool_ids {
            map.insert(id, Origin::MatingPool);
        }
        let mutated: HashSet<_> = self.mutation_events.iter().map(|m| m.offspring_id).collect();
        for id in self.offspring_ids().filter(|o| !mutated.contains(o)) {
            map.insert(id, Origin::CrossoverOffspring);
        }
        for m in &self.mutation_events {
            map.insert(m.mutant_id, Origin::MutatedOffspring);
        }
        map
    }

    /// The joint pool `Q(k)` in selection-record order.
    pub fn candidate_ids(&self) -> Vec<IndividualId> {
        self.selection.entries().map(|(_, e)| e.individual_id).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityPoint {
    pub generation: usize,
    pub igd: f64,
    pub hv: f64,
    pub sp: f64,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub objectives: Vec<ObjectiveVector>,
    pub decisions: Option<Vec<DecisionVector>>,
    pub hv_reference_point: Vec<f64>,
}

impl ReferenceSet {
    /// Builds a reference set whose hypervolume reference point is the
    /// componentwise maximum of the set scaled by 1.1.
    pub fn from_objectives(objectives: Vec<ObjectiveVector>) -> Result<Self> {
        let first = objectives
            .first()
            .ok_or_else(|| Error::contract("reference set is empty"))?;
        let mut worst = first.0.clone();
        for p in &objectives {
            if p.len() != worst.len() {
                return Err(Error::contract("reference points have mixed dimensionality"));
            }
            for (w, v) in worst.iter_mut().zip(p.iter()) {
                *w = w.max(*v);
            }
        }
        let hv_reference_point = worst.into_iter().map(|w| w * 1.1).collect();
        Ok(Self { objectives, decisions: None, hv_reference_point })
    }
}

/// The persistent unit of analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub config: RunConfig,
    /// Indexed by id.
    pub individuals: Vec<Individual>,
    pub generations: Vec<GenerationRecord>,
    pub quality_series: Vec<QualityPoint>,
    pub reference: Option<ReferenceSet>,
}

impl RunLog {
    pub fn individual(&self, id: IndividualId) -> Option<&Individual> {
        self.individuals.get(id.index()).filter(|i| i.id == id)
    }

    pub fn try_individual(&self, id: IndividualId) -> Result<&Individual> {
        self.individual(id).ok_or(Error::NotFound(id))
    }

    pub fn generation(&self, k: usize) -> Option<&GenerationRecord> {
        k.checked_sub(1).and_then(|i| self.generations.get(i))
    }

    pub fn generation_count(&self) -> usize {
        self.generations.len()
    }

    pub fn initial_population(&self) -> Vec<IndividualId> {
        self.individuals
            .iter()
            .take_while(|i| i.birth_generation == 0)
            .map(|i| i.id)
            .collect()
    }

    /// `P(k)`; generation 0 is the initial population.
    pub fn population_at(&self, k: usize) -> Option<Vec<IndividualId>> {
        if k == 0 {
            Some(self.initial_population())
        } else {
            self.generation(k).map(|g| g.population_ids.clone())
        }
    }

    pub fn objectives_of(&self, ids: &[IndividualId]) -> Vec<ObjectiveVector> {
        ids.iter()
            .filter_map(|&id| self.individual(id))
            .map(|i| i.objective.clone())
            .collect()
    }

    pub fn total_evaluations(&self) -> usize {
        self.initial_population().len() + self.generations.iter().map(|g| g.evaluations).sum::<usize>()
    }
}

/// Pareto dominance for minimization: `a` is no worse everywhere and strictly
/// better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "cannot compare objective vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Lists every violated invariant of `log`; an empty list means the log is
/// well formed.
pub fn validate_run_log(log: &RunLog) -> Vec<String> {
    let mut v = Vec::new();
    let n = log.problem.n;
    let m = log.problem.m;
    let mu = log.config.mu;

    for (index, ind) in log.individuals.iter().enumerate() {
        if ind.id.index() != index {
            v.push(format!("individual table slot {index} holds id {}", ind.id));
            continue;
        }
        if ind.decision.len() != n {
            v.push(format!("individual {}: decision length {}, expected {n}", ind.id, ind.decision.len()));
        } else if let Some((j, x)) = ind
            .decision
            .iter()
            .enumerate()
            .find(|(j, x)| !(log.problem.bounds[*j].0..=log.problem.bounds[*j].1).contains(*x))
        {
            v.push(format!("individual {}: variable {j} = {x} outside its bounds", ind.id));
        }
        if ind.objective.len() != m {
            v.push(format!("individual {}: objective length {}, expected {m}", ind.id, ind.objective.len()));
        }
        if ind.objective.iter().any(|f| !f.is_finite()) {
            v.push(format!("individual {}: non-finite objective", ind.id));
        }
        if let Some(death) = ind.death_generation {
            if death < ind.birth_generation {
                v.push(format!("individual {}: dies at {death} before birth at {}", ind.id, ind.birth_generation));
            }
        }
        let expected_parents = match ind.origin {
            None => 0,
            Some(Origin::CrossoverOffspring) => 2,
            Some(Origin::MutatedOffspring) => 1,
            Some(other) => {
                v.push(format!("individual {}: birth origin {} is not a creating operator", ind.id, other.as_str()));
                ind.parent_ids.len()
            }
        };
        if ind.parent_ids.len() != expected_parents {
            v.push(format!(
                "individual {}: {} parent links, expected {expected_parents}",
                ind.id,
                ind.parent_ids.len()
            ));
        }
        for &pid in &ind.parent_ids {
            let Some(parent) = log.individual(pid) else {
                v.push(format!("individual {}: parent {pid} does not exist", ind.id));
                continue;
            };
            let same_gen_ok = ind.origin == Some(Origin::MutatedOffspring)
                && parent.origin == Some(Origin::CrossoverOffspring)
                && parent.birth_generation == ind.birth_generation;
            if parent.birth_generation > ind.birth_generation || pid >= ind.id {
                v.push(format!(
                    "individual {}: parent {pid} (gen {}) is not older, parent graph not acyclic",
                    ind.id, parent.birth_generation
                ));
            } else if parent.birth_generation == ind.birth_generation && !same_gen_ok {
                v.push(format!(
                    "individual {}: parent {pid} born in the same generation without a mutation link",
                    ind.id
                ));
            }
        }
    }

    let initial = log.initial_population();
    if initial.len() != mu {
        v.push(format!("gen 0: {} initial individuals, expected {mu}", initial.len()));
    }

    if log.generations.len() != log.config.generations {
        v.push(format!(
            "{} generation records, config says {}",
            log.generations.len(),
            log.config.generations
        ));
    }
    if log.quality_series.len() != log.generations.len() {
        v.push(format!(
            "quality series has {} points for {} generations",
            log.quality_series.len(),
            log.generations.len()
        ));
    }
    for (i, q) in log.quality_series.iter().enumerate() {
        if q.generation != i + 1 {
            v.push(format!("quality point {i} labelled generation {}", q.generation));
        }
        if !(q.igd >= 0.0 && q.hv >= 0.0 && q.sp >= 0.0 && q.ms >= 0.0) {
            v.push(format!("gen {}: quality measures must be non-negative", q.generation));
        }
    }

    let lambda = log.config.operators.lambda;
    let mut previous: Vec<IndividualId> = initial;
    // First generation in which each id failed selection.
    let mut first_death: HashMap<IndividualId, usize> = HashMap::new();
    for (pos, g) in log.generations.iter().enumerate() {
        let k = g.index;
        if k != pos + 1 {
            v.push(format!("generation record {pos} has index {k}"));
        }
        let check_id = |id: IndividualId, what: &str, v: &mut Vec<String>| -> bool {
            match log.individual(id) {
                None => {
                    v.push(format!("gen {k}: {what} {id} does not resolve"));
                    false
                }
                Some(ind) if ind.birth_generation > k => {
                    v.push(format!("gen {k}: {what} {id} is born later (gen {})", ind.birth_generation));
                    false
                }
                Some(_) => true,
            }
        };

        if g.population_ids.len() != mu {
            v.push(format!("gen {k}: {} survivors, expected {mu}", g.population_ids.len()));
        }

        // R(k) and MP(k) partition P(k-1).
        let prev_set: HashSet<_> = previous.iter().copied().collect();
        let mut split = HashSet::new();
        for &id in g.reserved_ids.iter().chain(&g.mating_pool_ids) {
            check_id(id, "parent-generation member", &mut v);
            if !split.insert(id) {
                v.push(format!("gen {k}: {id} is both reserved and in the mating pool, or listed twice"));
            }
            if !prev_set.contains(&id) {
                v.push(format!("gen {k}: {id} in R(k) or MP(k) but not in P(k-1)"));
            }
        }
        if split.len() != prev_set.len() || !prev_set.iter().all(|id| split.contains(id)) {
            v.push(format!("gen {k}: R(k) and MP(k) do not cover P(k-1)"));
        }

        if g.mating_pairs.len() != lambda {
            v.push(format!("gen {k}: {} mating pairs, expected {lambda}", g.mating_pairs.len()));
        }
        let pool: HashSet<_> = g.mating_pool_ids.iter().copied().collect();
        let mut offspring = HashSet::new();
        for pair in &g.mating_pairs {
            if pair.parent_a == pair.parent_b {
                v.push(format!("gen {k}: mating pair with identical parents {}", pair.parent_a));
            }
            for p in [pair.parent_a, pair.parent_b] {
                if !pool.contains(&p) {
                    v.push(format!("gen {k}: parent {p} not in the mating pool"));
                }
            }
            for o in pair.offspring {
                if !check_id(o, "offspring", &mut v) {
                    continue;
                }
                offspring.insert(o);
                let ind = &log.individuals[o.index()];
                if ind.birth_generation != k || ind.origin != Some(Origin::CrossoverOffspring) {
                    v.push(format!("gen {k}: offspring {o} has birth {} / origin {:?}", ind.birth_generation, ind.origin));
                }
                if ind.parent_ids != [pair.parent_a, pair.parent_b] {
                    v.push(format!("gen {k}: offspring {o} parent links disagree with its mating pair"));
                }
            }
        }
        let mut mutated = HashSet::new();
        for ev in &g.mutation_events {
            if !offspring.contains(&ev.offspring_id) {
                v.push(format!("gen {k}: mutation of {} which is not a crossover offspring of this generation", ev.offspring_id));
                continue;
            }
            if !mutated.insert(ev.offspring_id) {
                v.push(format!("gen {k}: offspring {} mutated twice", ev.offspring_id));
            }
            if !check_id(ev.mutant_id, "mutant", &mut v) {
                continue;
            }
            let pre = &log.individuals[ev.offspring_id.index()];
            let mutant = &log.individuals[ev.mutant_id.index()];
            if mutant.origin != Some(Origin::MutatedOffspring) || mutant.parent_ids != [ev.offspring_id] {
                v.push(format!("gen {k}: mutant {} is not linked to its pre-image {}", ev.mutant_id, ev.offspring_id));
            }
            if ev.delta.len() != n {
                v.push(format!("gen {k}: mutation delta of {} has length {}", ev.mutant_id, ev.delta.len()));
            } else {
                let mismatch = pre
                    .decision
                    .iter()
                    .zip(&ev.delta)
                    .zip(mutant.decision.iter())
                    .any(|((x, d), y)| (x + d - y).abs() > 1e-12 * (1.0 + y.abs()));
                if mismatch {
                    v.push(format!("gen {k}: mutant {} decision differs from pre-image plus delta", ev.mutant_id));
                }
            }
            if ev.pre_objective != pre.objective {
                v.push(format!("gen {k}: recorded pre-objective of {} differs from the individual", ev.offspring_id));
            }
            if pre.death_generation != Some(k) {
                v.push(format!("gen {k}: mutated pre-image {} should be retired in its birth generation", ev.offspring_id));
            }
        }

        // Q(k) = R ∪ MP ∪ mutants ∪ (O - O').
        let mut expected_q: HashSet<IndividualId> = split.clone();
        expected_q.extend(offspring.iter().filter(|o| !mutated.contains(o)));
        expected_q.extend(g.mutation_events.iter().map(|m| m.mutant_id));
        let candidates = g.candidate_ids();
        let q_set: HashSet<_> = candidates.iter().copied().collect();
        if q_set != expected_q {
            v.push(format!("gen {k}: selection candidates differ from R(k) ∪ MP(k) ∪ offspring"));
        }
        let expected_size = g.reserved_ids.len() + g.mating_pool_ids.len() + 2 * g.mating_pairs.len();
        if candidates.len() != expected_size {
            v.push(format!("gen {k}: |Q(k)| = {}, expected {expected_size}", candidates.len()));
        }
        for msg in g.selection.violations(mu) {
            v.push(format!("gen {k}: {msg}"));
        }
        let survivors = g.selection.survivors();
        let mut population = g.population_ids.clone();
        population.sort_unstable();
        if survivors != population {
            v.push(format!("gen {k}: population differs from the selection survivors"));
        }
        for &id in &g.population_ids {
            check_id(id, "survivor", &mut v);
        }
        for (_, e) in g.selection.entries() {
            if !e.survived {
                first_death.entry(e.individual_id).or_insert(k);
            }
        }

        let expected_evals = 2 * g.mating_pairs.len() + g.mutation_events.len();
        if g.evaluations != expected_evals {
            v.push(format!("gen {k}: {} evaluations recorded, expected {expected_evals}", g.evaluations));
        }
        previous = g.population_ids.clone();
    }

    let last = log.generations.len();
    for ind in &log.individuals {
        let retired_pre_image = log
            .generation(ind.birth_generation)
            .is_some_and(|g| g.mutation_events.iter().any(|m| m.offspring_id == ind.id));
        if retired_pre_image {
            continue;
        }
        let expected = first_death.get(&ind.id).copied();
        if ind.birth_generation <= last && ind.death_generation != expected {
            v.push(format!(
                "individual {}: death generation {:?} disagrees with selection records ({:?})",
                ind.id, ind.death_generation, expected
            ));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn vec_pair(m: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0, 1.5, 2.0]), m)
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order(
            (a, b, c) in (1usize..=5).prop_flat_map(|m| (vec_pair(m), vec_pair(m), vec_pair(m)))
        ) {
            prop_assert!(!dominates(&a, &a).unwrap());
            if dominates(&a, &b).unwrap() {
                prop_assert!(!dominates(&b, &a).unwrap());
            }
            if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
                prop_assert!(dominates(&a, &c).unwrap());
            }
        }
    }

    #[test]
    fn selection_violations_detect_priority_breaks() {
        let e = |id, score, survived| SelectionEntry { individual_id: IndividualId(id), fitness_score: score, survived };
        let record = SelectionRecord {
            prioritized: true,
            groups: vec![
                SelectionGroup { rank: 1, members: vec![e(0, 1.0, true), e(1, 0.5, false)] },
                SelectionGroup { rank: 2, members: vec![e(2, 3.0, true)] },
            ],
        };
        let v = record.violations(2);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("rank 2"));
    }

    #[test]
    fn selection_violations_detect_score_inversions() {
        let e = |id, score, survived| SelectionEntry { individual_id: IndividualId(id), fitness_score: score, survived };
        let record = SelectionRecord {
            prioritized: true,
            groups: vec![SelectionGroup {
                rank: 1,
                members: vec![e(0, 1.0, false), e(1, 0.5, true), e(3, 0.5, true), e(2, 0.5, false)],
            }],
        };
        // #1 and #3 both lose to #0; #3 also loses the id tie-break against #2.
        let v = record.violations(2);
        assert_eq!(v.len(), 3, "{v:?}");
    }
}
