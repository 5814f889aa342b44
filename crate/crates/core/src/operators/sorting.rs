use std::collections::HashMap;

use crate::model::dominates_unchecked;

/// Deb's fast non-dominated sort. Fronts are returned best first; indices
/// within a front are ascending.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(objectives: &[P]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (objectives[i].as_ref(), objectives[j].as_ref());
            if dominates_unchecked(a, b) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates_unchecked(b, a) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of one front.
///
/// Identical objective vectors are collapsed before the computation: the
/// first occurrence receives the score of the distinct point and later
/// copies score 0. With at most two distinct points every distinct point is
/// a boundary point and scores `+inf`.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let mut scores = vec![0.0; front.len()];
    let mut first_index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut unique: Vec<usize> = Vec::new();
    for (i, p) in front.iter().enumerate() {
        let key: Vec<u64> = p.as_ref().iter().map(|v| (v + 0.0).to_bits()).collect();
        if let std::collections::hash_map::Entry::Vacant(slot) = first_index.entry(key) {
            slot.insert(i);
            unique.push(i);
        }
    }
    if unique.len() <= 2 {
        for &i in &unique {
            scores[i] = f64::INFINITY;
        }
        return scores;
    }
    let m = front[unique[0]].as_ref().len();
    let mut order = unique.clone();
    for j in 0..m {
        let value = |i: usize| front[i].as_ref()[j];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let lo = value(order[0]);
        let hi = value(order[order.len() - 1]);
        if hi <= lo {
            continue;
        }
        scores[order[0]] = f64::INFINITY;
        scores[order[order.len() - 1]] = f64::INFINITY;
        for w in order.windows(3) {
            scores[w[1]] += (value(w[2]) - value(w[0])) / (hi - lo);
        }
    }
    scores
}
