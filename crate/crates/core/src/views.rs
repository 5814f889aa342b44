//! Analysis payloads assembled from a run log: the overview series, the
//! per-generation scatterplot data, lineage queries and operator detail.
//!
//! Numeric per-individual data is returned as flat arrays aligned with an
//! id list (`objectives` holds `m` values per id, coordinates two).

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lineage::{ancestors, common_ancestor, life_span, CommonAncestor, LineageTree, Relation};
use crate::metrics::{nearest_neighbor_distance, nearest_reference_distance, origin_statistics, OriginStatistics, SurvivalCount};
use crate::model::{IndividualId, Origin, RunLog};
use crate::projection::{density_grid, fit_pca, DensityGrid, EmbeddingMode, PcaModel, TsneEmbedding};

/// Default cap on the number of generations in one detail request.
pub const DEFAULT_RANGE_CAP: usize = 12;

/// Resolution of the reference-density grid behind the objective scatterplot.
pub const DENSITY_RESOLUTION: (usize, usize) = (64, 64);

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn reference_points(log: &RunLog) -> Result<&[crate::model::ObjectiveVector]> {
    log.reference
        .as_ref()
        .map(|r| r.objectives.as_slice())
        .ok_or_else(|| Error::contract("run has no reference set"))
}

fn check_generation(log: &RunLog, k: usize) -> Result<()> {
    if k == 0 || k > log.generation_count() {
        return Err(Error::OutOfRange(format!(
            "generation {k} outside 1..={}",
            log.generation_count()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overview {
    pub mu: usize,
    pub generation_count: usize,
    pub generation: Vec<usize>,
    pub igd: Vec<f64>,
    pub hv: Vec<f64>,
    pub sp: Vec<f64>,
    pub ms: Vec<f64>,
    pub origin_statistics: Vec<OriginStatistics>,
}

pub fn run_overview(log: &RunLog) -> Overview {
    let q = &log.quality_series;
    Overview {
        mu: log.config.mu,
        generation_count: log.generation_count(),
        generation: q.iter().map(|p| p.generation).collect(),
        igd: q.iter().map(|p| p.igd).collect(),
        hv: q.iter().map(|p| p.hv).collect(),
        sp: q.iter().map(|p| p.sp).collect(),
        ms: q.iter().map(|p| p.ms).collect(),
        origin_statistics: log.generations.iter().map(origin_statistics).collect(),
    }
}

/// Which individual-level distance drives the marker size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMeasure {
    #[default]
    NearestReference,
    NearestNeighborObjective,
    NearestNeighborDecision,
}

impl FromStr for SizeMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest_reference" => Ok(SizeMeasure::NearestReference),
            "nearest_neighbor_objective" => Ok(SizeMeasure::NearestNeighborObjective),
            "nearest_neighbor_decision" => Ok(SizeMeasure::NearestNeighborDecision),
            other => Err(Error::contract(format!("unknown size measure {other:?}"))),
        }
    }
}

/// Checks `from..=to` against the run length and `cap`.
pub fn check_range(log: &RunLog, from: usize, to: usize, cap: usize) -> Result<()> {
    check_generation(log, from)?;
    check_generation(log, to)?;
    if from > to {
        return Err(Error::OutOfRange(format!("empty range {from}..={to}")));
    }
    let len = to - from + 1;
    if len > cap {
        return Err(Error::OutOfRange(format!(
            "range of {len} generations exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

/// Every member of `Q(k)` for `k` in `from..=to`, ascending and without
/// repeats: the point set a decision-space embedding is fit on.
pub fn range_union(log: &RunLog, from: usize, to: usize) -> Vec<IndividualId> {
    let mut ids = BTreeSet::new();
    for k in from..=to {
        if let Some(g) = log.generation(k) {
            ids.extend(g.candidate_ids());
        }
    }
    ids.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSlice {
    pub generation: usize,
    pub ids: Vec<IndividualId>,
    pub origins: Vec<Origin>,
    pub survived: Vec<bool>,
    pub objectives: Vec<f64>,
    pub pca: Vec<f64>,
    pub tsne: Vec<f64>,
    pub nearest_reference: Vec<f64>,
    #[serde(with = "crate::float_serde::vec")]
    pub nearest_neighbor_objective: Vec<f64>,
    #[serde(with = "crate::float_serde::vec")]
    pub nearest_neighbor_decision: Vec<f64>,
    /// The selected size measure, copied from one of the three arrays above.
    #[serde(with = "crate::float_serde::vec")]
    pub size: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingInfo {
    pub mode: EmbeddingMode,
    pub perplexity: f64,
    pub iterations: usize,
    pub kl_divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationDetail {
    pub from: usize,
    pub to: usize,
    pub m: usize,
    pub size_measure: SizeMeasure,
    pub generations: Vec<GenerationSlice>,
    pub pca_explained_variance: [f64; 2],
    pub embedding: EmbeddingInfo,
    /// Reference points projected with the PCA model.
    pub reference_pca: Vec<f64>,
    pub density: DensityGrid,
}

/// Scatterplot data for `from..=to`. `tsne` must be an embedding of
/// [`range_union`]`(log, from, to)` in that order.
#[allow(clippy::too_many_arguments)]
pub fn generation_detail(
    log: &RunLog,
    from: usize,
    to: usize,
    size: SizeMeasure,
    cap: usize,
    pca: &PcaModel,
    tsne: &TsneEmbedding,
    density: &DensityGrid,
) -> Result<GenerationDetail> {
    check_range(log, from, to, cap)?;
    let union = range_union(log, from, to);
    if tsne.coordinates.len() != union.len() {
        return Err(Error::contract(format!(
            "embedding has {} points, the range holds {}",
            tsne.coordinates.len(),
            union.len()
        )));
    }
    let layout: HashMap<IndividualId, [f64; 2]> = union.iter().copied().zip(tsne.coordinates.iter().copied()).collect();
    let reference = reference_points(log)?;

    let mut generations = Vec::with_capacity(to - from + 1);
    for k in from..=to {
        let g = log.generation(k).expect("checked range");
        let origins = g.origin_map();
        let ids = g.candidate_ids();
        let members: Vec<&crate::model::Individual> = ids.iter().map(|id| &log.individuals[id.index()]).collect();
        let objectives: Vec<&[f64]> = members.iter().map(|i| i.objective.as_slice()).collect();
        let decisions: Vec<&[f64]> = members.iter().map(|i| i.decision.as_slice()).collect();
        let mut slice = GenerationSlice {
            generation: k,
            origins: ids.iter().map(|id| origins[id]).collect(),
            survived: ids.iter().map(|&id| g.selection.entry(id).is_some_and(|(_, e)| e.survived)).collect(),
            objectives: objectives.iter().flat_map(|o| o.iter().copied()).collect(),
            pca: Vec::with_capacity(2 * ids.len()),
            tsne: ids.iter().flat_map(|id| layout[id]).collect(),
            nearest_reference: objectives
                .iter()
                .map(|o| nearest_reference_distance(o, reference))
                .collect::<Result<_>>()?,
            nearest_neighbor_objective: (0..ids.len()).map(|i| nearest_neighbor_distance(i, &objectives)).collect(),
            nearest_neighbor_decision: (0..ids.len()).map(|i| nearest_neighbor_distance(i, &decisions)).collect(),
            size: Vec::new(),
            ids,
        };
        for o in &objectives {
            slice.pca.extend(pca.project_point(o)?);
        }
        slice.size = match size {
            SizeMeasure::NearestReference => slice.nearest_reference.clone(),
            SizeMeasure::NearestNeighborObjective => slice.nearest_neighbor_objective.clone(),
            SizeMeasure::NearestNeighborDecision => slice.nearest_neighbor_decision.clone(),
        };
        generations.push(slice);
    }
    let mut reference_pca = Vec::with_capacity(2 * reference.len());
    for r in reference {
        reference_pca.extend(pca.project_point(r)?);
    }
    Ok(GenerationDetail {
        from,
        to,
        m: log.problem.m,
        size_measure: size,
        generations,
        pca_explained_variance: pca.explained_variance,
        embedding: EmbeddingInfo {
            mode: tsne.mode,
            perplexity: tsne.perplexity,
            iterations: tsne.iterations,
            kl_divergence: tsne.kl_divergence,
        },
        reference_pca,
        density: density.clone(),
    })
}

/// PCA fitted on the run's reference set, and the density of the projected
/// reference points. Both depend only on the run, so callers cache them.
pub fn reference_layout(log: &RunLog) -> Result<(PcaModel, DensityGrid)> {
    let reference = reference_points(log)?;
    let pca = fit_pca(reference)?;
    let projected = crate::projection::project(&pca, reference)?;
    let density = density_grid(&projected, DENSITY_RESOLUTION, None)?;
    Ok((pca, density))
}

/// Decision vectors of [`range_union`]`(log, from, to)`, the input of the
/// decision-space embedding.
pub fn range_decisions(log: &RunLog, from: usize, to: usize) -> Vec<&[f64]> {
    range_union(log, from, to)
        .into_iter()
        .map(|id| log.individuals[id.index()].decision.as_slice())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanView {
    pub id: IndividualId,
    pub birth: usize,
    pub death: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeView {
    #[serde(flatten)]
    pub tree: LineageTree,
    /// Objective-space distance between the endpoints of each edge, aligned
    /// with `edges` (0 for self-continuation).
    pub edge_distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineageView {
    pub spans: Vec<SpanView>,
    pub trees: Vec<TreeView>,
    /// `None` for fewer than two ids or disjoint ancestries.
    pub common_ancestor: Option<CommonAncestor>,
    /// First and last generation touched by any node or span.
    pub axis: [usize; 2],
}

/// Lineage panels for `ids`. With `from`, trees stop at that generation.
pub fn lineage_query(log: &RunLog, ids: &[IndividualId], from: Option<usize>) -> Result<LineageView> {
    if ids.is_empty() {
        return Err(Error::contract("lineage query needs at least one id"));
    }
    let mut spans = Vec::with_capacity(ids.len());
    let mut trees = Vec::with_capacity(ids.len());
    let last = log.generation_count();
    let mut axis = [usize::MAX, 0];
    for &id in ids {
        let span = life_span(log, id)?;
        let back = from.map(|f| span.birth.saturating_sub(f));
        let tree = ancestors(log, id, back)?;
        let edge_distances = tree
            .edges
            .iter()
            .map(|e| match e.relation {
                Relation::ReservedSelf => 0.0,
                _ => euclidean(&log.individuals[e.child.index()].objective, &log.individuals[e.parent.index()].objective),
            })
            .collect();
        for n in &tree.nodes {
            axis[0] = axis[0].min(n.generation);
        }
        axis[1] = axis[1].max(span.death.unwrap_or(last));
        spans.push(SpanView { id, birth: span.birth, death: span.death });
        trees.push(TreeView { tree, edge_distances });
    }
    let common_ancestor = if ids.len() >= 2 { common_ancestor(log, ids)? } else { None };
    Ok(LineageView { spans, trees, common_ancestor, axis })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortOrder {
    Ascending,
    Descending,
}

impl FromStr for SortOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" | "ascending" => Ok(SortOrder::Ascending),
            "desc" | "descending" => Ok(SortOrder::Descending),
            other => Err(Error::contract(format!("unknown sort order {other:?}"))),
        }
    }
}

/// Server-side sort keys of the operator panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortKey {
    /// Crossover pairs by decision distance between the parents.
    ParentDistance,
    /// Crossover pairs by mean parent-to-offspring decision distance.
    OffspringDistance,
    /// Mutations by the length of the perturbation.
    MutationDistance,
    /// Mutations by one raw delta component.
    Delta(usize),
}

impl FromStr for SortKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parent_distance" => Ok(SortKey::ParentDistance),
            "offspring_distance" => Ok(SortKey::OffspringDistance),
            "mutation_distance" => Ok(SortKey::MutationDistance),
            other => other
                .strip_prefix("delta:")
                .and_then(|d| d.parse().ok())
                .map(SortKey::Delta)
                .ok_or_else(|| Error::contract(format!("unknown sort key {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairView {
    pub parent_a: IndividualId,
    pub parent_b: IndividualId,
    pub offspring: [IndividualId; 2],
    pub spread_factor: f64,
    pub perturbation_magnitudes: [f64; 2],
    pub parent_distance: f64,
    /// `[d(parent_a, offspring[0]), d(parent_b, offspring[1])]`.
    pub offspring_distances: [f64; 2],
    /// Nearest-reference distances of `[parent_a, parent_b]`.
    pub parent_nearest_reference: [f64; 2],
    pub offspring_nearest_reference: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationView {
    pub offspring_id: IndividualId,
    pub mutant_id: IndividualId,
    pub delta: Vec<f64>,
    /// Per dimension, min-max normalized over this generation's mutations;
    /// constant dimensions map to 0.
    pub delta_normalized: Vec<f64>,
    pub distance: f64,
    pub pre_nearest_reference: f64,
    pub mutant_nearest_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberView {
    pub id: IndividualId,
    pub origin: Origin,
    #[serde(with = "crate::float_serde")]
    pub fitness_score: f64,
    pub survived: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginStack {
    pub origin: Origin,
    #[serde(flatten)]
    pub count: SurvivalCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupView {
    pub rank: usize,
    pub total: usize,
    pub survivors: usize,
    /// Highest-scoring member.
    pub top: Option<IndividualId>,
    /// One entry per origin, in the fixed origin order.
    pub stack: Vec<OriginStack>,
    pub members: Vec<MemberView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDetail {
    pub generation: usize,
    pub pairs: Vec<PairView>,
    pub mutations: Vec<MutationView>,
    pub prioritized: bool,
    pub groups: Vec<GroupView>,
}

/// Operator panels for generation `k`, optionally sorted by `sort`.
pub fn operator_detail(log: &RunLog, k: usize, sort: Option<(SortKey, SortOrder)>) -> Result<OperatorDetail> {
    check_generation(log, k)?;
    let g = log.generation(k).expect("checked");
    let reference = reference_points(log)?;
    let ind = |id: IndividualId| &log.individuals[id.index()];
    let near = |id: IndividualId| nearest_reference_distance(&ind(id).objective, reference);

    let mut pairs = Vec::with_capacity(g.mating_pairs.len());
    for p in &g.mating_pairs {
        let (a, b) = (ind(p.parent_a), ind(p.parent_b));
        pairs.push(PairView {
            parent_a: p.parent_a,
            parent_b: p.parent_b,
            offspring: p.offspring,
            spread_factor: p.spread_factor,
            perturbation_magnitudes: p.perturbation_magnitudes,
            parent_distance: euclidean(&a.decision, &b.decision),
            offspring_distances: [
                euclidean(&a.decision, &ind(p.offspring[0]).decision),
                euclidean(&b.decision, &ind(p.offspring[1]).decision),
            ],
            parent_nearest_reference: [near(p.parent_a)?, near(p.parent_b)?],
            offspring_nearest_reference: [near(p.offspring[0])?, near(p.offspring[1])?],
        });
    }

    let n = log.problem.n;
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for ev in &g.mutation_events {
        for (j, d) in ev.delta.iter().enumerate() {
            lo[j] = lo[j].min(*d);
            hi[j] = hi[j].max(*d);
        }
    }
    let mut mutations = Vec::with_capacity(g.mutation_events.len());
    for ev in &g.mutation_events {
        mutations.push(MutationView {
            offspring_id: ev.offspring_id,
            mutant_id: ev.mutant_id,
            delta_normalized: ev
                .delta
                .iter()
                .enumerate()
                .map(|(j, d)| if hi[j] > lo[j] { (d - lo[j]) / (hi[j] - lo[j]) } else { 0.0 })
                .collect(),
            distance: ev.delta.iter().map(|d| d * d).sum::<f64>().sqrt(),
            delta: ev.delta.clone(),
            pre_nearest_reference: nearest_reference_distance(&ev.pre_objective, reference)?,
            mutant_nearest_reference: near(ev.mutant_id)?,
        });
    }

    if let Some((key, order)) = sort {
        let directed = |a: f64, b: f64| match order {
            SortOrder::Ascending => a.total_cmp(&b),
            SortOrder::Descending => b.total_cmp(&a),
        };
        match key {
            SortKey::ParentDistance => pairs.sort_by(|x, y| directed(x.parent_distance, y.parent_distance)),
            SortKey::OffspringDistance => {
                let mean = |p: &PairView| 0.5 * (p.offspring_distances[0] + p.offspring_distances[1]);
                pairs.sort_by(|x, y| directed(mean(x), mean(y)));
            }
            SortKey::MutationDistance => mutations.sort_by(|x, y| directed(x.distance, y.distance)),
            SortKey::Delta(d) => {
                if d >= n {
                    return Err(Error::contract(format!("delta dimension {d} outside 0..{n}")));
                }
                mutations.sort_by(|x, y| directed(x.delta[d], y.delta[d]));
            }
        }
    }

    let origins = g.origin_map();
    let groups = g
        .selection
        .groups
        .iter()
        .map(|group| {
            let members: Vec<MemberView> = group
                .members
                .iter()
                .map(|e| MemberView {
                    id: e.individual_id,
                    origin: origins[&e.individual_id],
                    fitness_score: e.fitness_score,
                    survived: e.survived,
                })
                .collect();
            let stack = Origin::ALL
                .iter()
                .map(|&origin| {
                    let mut count = SurvivalCount::default();
                    for m in members.iter().filter(|m| m.origin == origin) {
                        if m.survived {
                            count.survived += 1;
                        } else {
                            count.died += 1;
                        }
                    }
                    OriginStack { origin, count }
                })
                .collect();
            GroupView {
                rank: group.rank,
                total: members.len(),
                survivors: group.survivor_count(),
                top: members.first().map(|m| m.id),
                stack,
                members,
            }
        })
        .collect();

    Ok(OperatorDetail { generation: k, pairs, mutations, prioritized: g.selection.prioritized, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Algorithm, RunConfig};
    use crate::problems::ProblemSpec;

    fn small() -> RunLog {
        run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(12, 5, 4), None).unwrap()
    }

    #[test]
    fn overview_lengths() {
        let log = small();
        let o = run_overview(&log);
        assert_eq!(o.igd.len(), 5);
        assert_eq!(o.origin_statistics.len(), 5);
        assert!(o.origin_statistics.iter().all(|s| s.total_survived() == 12));
    }

    #[test]
    fn operator_detail_normalization_and_stacks() {
        let log = small();
        let d = operator_detail(&log, 3, None).unwrap();
        let g = log.generation(3).unwrap();
        for j in 0..log.problem.n {
            let col: Vec<f64> = d.mutations.iter().map(|m| m.delta_normalized[j]).collect();
            let raw: Vec<f64> = d.mutations.iter().map(|m| m.delta[j]).collect();
            if raw.iter().any(|v| *v != raw[0]) {
                assert_eq!(col.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
                assert_eq!(col.iter().copied().fold(0.0, f64::max), 1.0);
            } else {
                assert!(col.iter().all(|v| *v == 0.0));
            }
        }
        for m in &d.mutations {
            let pre = &log.individuals[m.offspring_id.index()].decision;
            let mutant = &log.individuals[m.mutant_id.index()].decision;
            for ((x, y), dv) in pre.iter().zip(mutant.iter()).zip(&m.delta) {
                assert!((y - x - dv).abs() < 1e-12);
            }
        }
        for group in &d.groups {
            let stacked: usize = group.stack.iter().map(|s| s.count.total()).sum();
            assert_eq!(stacked, group.total);
        }
        assert_eq!(d.pairs.len(), g.mating_pairs.len());
        assert!(matches!(operator_detail(&log, 6, None), Err(Error::OutOfRange(_))));
        assert!(matches!(operator_detail(&log, 0, None), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn sorting() {
        let log = small();
        let d = operator_detail(&log, 2, Some(("parent_distance".parse().unwrap(), SortOrder::Descending))).unwrap();
        assert!(d.pairs.windows(2).all(|w| w[0].parent_distance >= w[1].parent_distance));
        let d = operator_detail(&log, 2, Some(("delta:1".parse().unwrap(), SortOrder::Ascending))).unwrap();
        assert!(d.mutations.windows(2).all(|w| w[0].delta[1] <= w[1].delta[1]));
        assert!("delta:x".parse::<SortKey>().is_err());
    }

    #[test]
    fn lineage_edges_carry_objective_distances() {
        let log = small();
        let pair = &log.generations[3].mating_pairs[0];
        let view = lineage_query(&log, &pair.offspring, None).unwrap();
        assert!(view.common_ancestor.is_some());
        for t in &view.trees {
            for (e, d) in t.tree.edges.iter().zip(&t.edge_distances) {
                if e.relation != Relation::ReservedSelf {
                    let want = euclidean(&log.individuals[e.child.index()].objective, &log.individuals[e.parent.index()].objective);
                    assert_eq!(*d, want);
                }
            }
        }
        let single = lineage_query(&log, &[IndividualId(0)], None).unwrap();
        assert_eq!(single.spans[0].birth, 0);
        assert_eq!(single.trees[0].tree.nodes.len(), 1);
    }

    #[test]
    fn range_checks() {
        let log = small();
        assert!(check_range(&log, 1, 5, 12).is_ok());
        assert!(matches!(check_range(&log, 1, 5, 3), Err(Error::OutOfRange(_))));
        assert!(check_range(&log, 4, 2, 12).is_err());
        assert!(check_range(&log, 1, 9, 12).is_err());
    }
}
