//! Ancestry queries over the parent graph of a run.
//!
//! Mutants link to their crossover pre-image, which links to the two mating
//! parents, so the pre-image shows up as an intermediate node. A parent that
//! was carried over several generations before mating gets one
//! [`Relation::ReservedSelf`] edge per generation it survived.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IndividualId, Origin, RunLog};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Crossover,
    MutationPreImage,
    /// The individual survived into the next generation.
    ReservedSelf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineageNode {
    pub id: IndividualId,
    /// Birth generation.
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineageEdge {
    pub child: IndividualId,
    pub parent: IndividualId,
    pub relation: Relation,
    /// Generation in which the child side of the edge exists. For a
    /// self-continuation edge, the generation survived into.
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineageTree {
    pub root_id: IndividualId,
    /// Sorted by id.
    pub nodes: Vec<LineageNode>,
    pub edges: Vec<LineageEdge>,
}

impl LineageTree {
    /// Number of creation edges (crossover or mutation) on the longest path
    /// from the root.
    pub fn depth(&self) -> usize {
        let mut parents: BTreeMap<IndividualId, Vec<IndividualId>> = BTreeMap::new();
        for e in self.edges.iter().filter(|e| e.relation != Relation::ReservedSelf) {
            parents.entry(e.child).or_default().push(e.parent);
        }
        fn walk(id: IndividualId, parents: &BTreeMap<IndividualId, Vec<IndividualId>>) -> usize {
            parents
                .get(&id)
                .map_or(0, |ps| 1 + ps.iter().map(|&p| walk(p, parents)).max().unwrap_or(0))
        }
        walk(self.root_id, &parents)
    }
}

/// Ancestry of `id`. With `max_generations_back = Some(d)`, only links whose
/// parent side lies at generation `birth(id) - d` or later are followed.
pub fn ancestors(log: &RunLog, id: IndividualId, max_generations_back: Option<usize>) -> Result<LineageTree> {
    let root = log.try_individual(id)?;
    let floor = max_generations_back.map_or(0, |d| root.birth_generation.saturating_sub(d));
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    // Latest generation in which each node is needed as a parent.
    let mut needed_until: BTreeMap<IndividualId, usize> = BTreeMap::new();
    let mut stack = vec![id];
    nodes.insert(id);
    while let Some(current) = stack.pop() {
        let child = &log.individuals[current.index()];
        let (relation, parent_present_at) = match child.origin {
            Some(Origin::MutatedOffspring) => (Relation::MutationPreImage, child.birth_generation),
            _ => (Relation::Crossover, child.birth_generation.saturating_sub(1)),
        };
        if child.parent_ids.is_empty() || parent_present_at < floor {
            continue;
        }
        for &pid in &child.parent_ids {
            let parent = log.try_individual(pid)?;
            edges.push(LineageEdge { child: current, parent: pid, relation, generation: child.birth_generation });
            if relation == Relation::Crossover {
                let until = needed_until.entry(pid).or_insert(parent.birth_generation);
                *until = (*until).max(parent_present_at);
            }
            if nodes.insert(pid) {
                stack.push(pid);
            }
        }
    }
    for (&pid, &until) in &needed_until {
        let birth = log.individuals[pid.index()].birth_generation;
        for t in (birth + 1).max(floor + 1)..=until {
            edges.push(LineageEdge { child: pid, parent: pid, relation: Relation::ReservedSelf, generation: t });
        }
    }
    edges.sort_by_key(|e| (e.child, e.generation, e.parent));
    Ok(LineageTree {
        root_id: id,
        nodes: nodes
            .into_iter()
            .map(|n| LineageNode { id: n, generation: log.individuals[n.index()].birth_generation })
            .collect(),
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LifeSpan {
    pub birth: usize,
    /// First generation whose selection the individual did not survive;
    /// `None` if alive at the end of the run. Mutated pre-images never enter
    /// selection and die in their birth generation.
    pub death: Option<usize>,
}

impl LifeSpan {
    pub fn alive_at(&self, k: usize) -> bool {
        k >= self.birth && self.death.is_none_or(|d| k < d)
    }
}

/// Life span derived from the selection records (not from the stored
/// `death_generation`, so the two can be cross-checked).
pub fn life_span(log: &RunLog, id: IndividualId) -> Result<LifeSpan> {
    let ind = log.try_individual(id)?;
    let birth = ind.birth_generation;
    if let Some(g) = log.generation(birth) {
        if g.mutation_events.iter().any(|m| m.offspring_id == id) {
            return Ok(LifeSpan { birth, death: Some(birth) });
        }
    }
    let death = log.generations[birth.saturating_sub(1).min(log.generations.len())..]
        .iter()
        .find(|g| g.selection.entry(id).is_some_and(|(_, e)| !e.survived))
        .map(|g| g.index);
    Ok(LifeSpan { birth, death })
}

/// Every ancestor of `id`, including `id` itself.
pub fn ancestor_set(log: &RunLog, id: IndividualId) -> Result<HashSet<IndividualId>> {
    log.try_individual(id)?;
    let mut seen = HashSet::from([id]);
    let mut stack = vec![id];
    while let Some(current) = stack.pop() {
        for &p in &log.individuals[current.index()].parent_ids {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    Ok(seen)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonAncestor {
    /// Smallest id among the most recent common ancestors.
    pub id: IndividualId,
    pub generation: usize,
    /// All common ancestors born in `generation`, ascending.
    pub candidates: Vec<IndividualId>,
}

/// Most recent individual that is an ancestor of (or equal to) every id.
pub fn common_ancestor(log: &RunLog, ids: &[IndividualId]) -> Result<Option<CommonAncestor>> {
    if ids.len() < 2 {
        return Err(Error::contract("common ancestor needs at least two ids"));
    }
    let mut shared = ancestor_set(log, ids[0])?;
    for &id in &ids[1..] {
        let other = ancestor_set(log, id)?;
        shared.retain(|a| other.contains(a));
    }
    let Some(generation) = shared.iter().map(|a| log.individuals[a.index()].birth_generation).max() else {
        return Ok(None);
    };
    let mut candidates: Vec<IndividualId> = shared
        .into_iter()
        .filter(|a| log.individuals[a.index()].birth_generation == generation)
        .collect();
    candidates.sort_unstable();
    Ok(Some(CommonAncestor { id: candidates[0], generation, candidates }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Algorithm, RunConfig};
    use crate::problems::ProblemSpec;

    fn small_run() -> RunLog {
        run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(8, 6, 11), None).unwrap()
    }

    #[test]
    fn initial_individual_is_a_single_node() {
        let log = small_run();
        let tree = ancestors(&log, IndividualId(0), None).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert!(tree.edges.is_empty());
        assert_eq!(life_span(&log, IndividualId(0)).unwrap().birth, 0);
    }

    #[test]
    fn mutant_chain() {
        let log = small_run();
        let ev = log.generations.iter().flat_map(|g| &g.mutation_events).next().expect("some mutation");
        let tree = ancestors(&log, ev.mutant_id, None).unwrap();
        let pre = tree.edges.iter().find(|e| e.child == ev.mutant_id).unwrap();
        assert_eq!(pre.parent, ev.offspring_id);
        assert_eq!(pre.relation, Relation::MutationPreImage);
        assert_eq!(tree.edges.iter().filter(|e| e.child == ev.offspring_id && e.relation == Relation::Crossover).count(), 2);
        let span = life_span(&log, ev.offspring_id).unwrap();
        assert_eq!(span.death, Some(span.birth));
    }

    #[test]
    fn depth_bound_and_spans_agree_with_log() {
        let log = small_run();
        for ind in &log.individuals {
            let tree = ancestors(&log, ind.id, None).unwrap();
            assert!(tree.depth() <= 2 * ind.birth_generation);
            assert_eq!(life_span(&log, ind.id).unwrap().death, ind.death_generation);
        }
    }

    #[test]
    fn siblings_share_a_parent() {
        let log = small_run();
        let pair = &log.generations[2].mating_pairs[0];
        let ca = common_ancestor(&log, &pair.offspring).unwrap().unwrap();
        assert!(ca.id == pair.parent_a || ca.id == pair.parent_b);
        let birth = |id: IndividualId| log.individuals[id.index()].birth_generation;
        assert_eq!(ca.generation, birth(pair.parent_a).max(birth(pair.parent_b)));
    }

    #[test]
    fn initial_individuals_have_no_common_ancestor() {
        let log = small_run();
        assert_eq!(common_ancestor(&log, &[IndividualId(0), IndividualId(1)]).unwrap(), None);
        assert!(common_ancestor(&log, &[IndividualId(0)]).is_err());
        assert!(matches!(
            common_ancestor(&log, &[IndividualId(0), IndividualId(999_999)]),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn cutoff_limits_the_tree() {
        let log = small_run();
        let last = log.generations.last().unwrap().population_ids[0];
        let full = ancestors(&log, last, None).unwrap();
        let short = ancestors(&log, last, Some(1)).unwrap();
        assert!(short.nodes.len() <= full.nodes.len());
        let floor = log.individuals[last.index()].birth_generation.saturating_sub(1);
        for e in short.edges.iter().filter(|e| e.relation == Relation::Crossover) {
            assert!(e.generation > floor);
        }
    }
}
