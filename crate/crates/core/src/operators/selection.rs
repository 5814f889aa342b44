use std::collections::HashSet;

use super::sorting::{crowding_distance, fast_nondominated_sort};
use crate::engine::Algorithm;
use crate::error::{Error, Result};
use crate::metrics::hypervolume_exact;
use crate::model::{IndividualId, SelectionEntry, SelectionGroup, SelectionRecord};

/// One member of the joint pool `Q(k)`.
#[derive(Debug, Clone, Copy)]
pub struct Candidate<'a> {
    pub id: IndividualId,
    pub objective: &'a [f64],
}

/// Exclusive hypervolume contribution of `front[index]`: the volume lost
/// when the point is removed. Returns the contribution together with the
/// indices of the points that bound it; removing any other point leaves the
/// contribution unchanged.
pub fn hv_contribution_of<P: AsRef<[f64]>>(
    front: &[P],
    index: usize,
    reference: &[f64],
    alive: impl Fn(usize) -> bool,
) -> (f64, Vec<usize>) {
    let p = front[index].as_ref();
    if !p.iter().zip(reference).all(|(x, r)| x < r) {
        return (0.0, Vec::new());
    }
    // Each other point q cuts max(p, q) out of p's box.
    let mut limited: Vec<(f64, usize, Vec<f64>)> = Vec::new();
    for (j, q) in front.iter().enumerate() {
        if j == index || !alive(j) {
            continue;
        }
        let q = q.as_ref();
        if !q.iter().zip(reference).all(|(x, r)| x < r) {
            continue;
        }
        let cut: Vec<f64> = p.iter().zip(q).map(|(a, b)| a.max(*b)).collect();
        if cut == p {
            return (0.0, vec![j]);
        }
        limited.push((cut.iter().sum(), j, cut));
    }
    limited.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut kept: Vec<(usize, Vec<f64>)> = Vec::new();
    for (_, j, cut) in limited {
        let covered = kept
            .iter()
            .any(|(_, k)| k.iter().zip(&cut).all(|(a, b)| a <= b));
        if !covered {
            kept.push((j, cut));
        }
    }
    let box_volume: f64 = p.iter().zip(reference).map(|(a, r)| r - a).product();
    let cuts: Vec<&[f64]> = kept.iter().map(|(_, c)| c.as_slice()).collect();
    let contribution = (box_volume - hypervolume_exact(&cuts, reference)).max(0.0);
    (contribution, kept.into_iter().map(|(j, _)| j).collect())
}

/// Exclusive hypervolume contribution of every point of `front`.
/// Points that do not strictly dominate `reference` contribute 0.
pub fn hv_contribution<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Vec<f64> {
    (0..front.len())
        .map(|i| hv_contribution_of(front, i, reference, |_| true).0)
        .collect()
}

/// Prioritized non-dominated grouping plus crowding-distance (NSGA-II) or
/// hypervolume-contribution (SMS-EMOA) scoring; exactly `mu` survivors.
///
/// Whole fronts survive until the cut front. NSGA-II truncates the cut front
/// by crowding distance. SMS-EMOA removes the member with the smallest
/// contribution one at a time, recomputing contributions after each removal;
/// a removed member's score is its contribution at removal time and
/// survivors keep their final contribution. Score ties go to the lower id.
pub fn environmental_select(
    candidates: &[Candidate<'_>],
    mu: usize,
    algorithm: Algorithm,
    hv_reference_point: &[f64],
) -> Result<SelectionRecord> {
    if candidates.len() < mu {
        return Err(Error::contract(format!(
            "{} candidates cannot fill a population of {mu}",
            candidates.len()
        )));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = candidates.iter().find(|c| !seen.insert(c.id)) {
        return Err(Error::contract(format!("candidate {} listed twice", dup.id)));
    }
    let objectives: Vec<&[f64]> = candidates.iter().map(|c| c.objective).collect();
    let fronts = fast_nondominated_sort(&objectives);

    let mut groups = Vec::with_capacity(fronts.len());
    let mut filled = 0usize;
    for (f, front) in fronts.iter().enumerate() {
        let points: Vec<&[f64]> = front.iter().map(|&i| objectives[i]).collect();
        let room = mu.saturating_sub(filled);
        let (scores, survived): (Vec<f64>, Vec<bool>) = if room >= front.len() || room == 0 {
            let scores = match algorithm {
                Algorithm::Nsga2 => crowding_distance(&points),
                Algorithm::SmsEmoa => hv_contribution(&points, hv_reference_point),
            };
            let keep = room > 0;
            (scores, vec![keep; front.len()])
        } else {
            let ids: Vec<IndividualId> = front.iter().map(|&i| candidates[i].id).collect();
            match algorithm {
                Algorithm::Nsga2 => {
                    let scores = crowding_distance(&points);
                    let mut order: Vec<usize> = (0..front.len()).collect();
                    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(ids[a].cmp(&ids[b])));
                    let mut survived = vec![false; front.len()];
                    for &i in &order[..room] {
                        survived[i] = true;
                    }
                    (scores, survived)
                }
                Algorithm::SmsEmoa => greedy_truncation(&points, &ids, room, hv_reference_point),
            }
        };
        filled += survived.iter().filter(|s| **s).count();
        let mut members: Vec<SelectionEntry> = front
            .iter()
            .zip(scores.into_iter().zip(survived))
            .map(|(&i, (fitness_score, survived))| SelectionEntry {
                individual_id: candidates[i].id,
                fitness_score,
                survived,
            })
            .collect();
        members.sort_by(|a, b| {
            b.fitness_score
                .total_cmp(&a.fitness_score)
                .then(a.individual_id.cmp(&b.individual_id))
        });
        groups.push(SelectionGroup { rank: f + 1, members });
    }
    Ok(SelectionRecord { prioritized: true, groups })
}

fn greedy_truncation(
    points: &[&[f64]],
    ids: &[IndividualId],
    keep: usize,
    reference: &[f64],
) -> (Vec<f64>, Vec<bool>) {
    let n = points.len();
    let mut alive = vec![true; n];
    let mut scores = vec![0.0; n];
    let mut bounded_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let (c, b) = hv_contribution_of(points, i, reference, |_| true);
        scores[i] = c;
        bounded_by[i] = b;
    }
    for _ in keep..n {
        // Smallest contribution goes; among equals the higher id goes.
        let victim = (0..n)
            .filter(|&i| alive[i])
            .min_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(ids[b].cmp(&ids[a])))
            .expect("more alive points than survivors");
        alive[victim] = false;
        for i in 0..n {
            if alive[i] && bounded_by[i].contains(&victim) {
                let (c, b) = hv_contribution_of(points, i, reference, |j| alive[j]);
                scores[i] = c;
                bounded_by[i] = b;
            }
        }
    }
    (scores, alive)
}
