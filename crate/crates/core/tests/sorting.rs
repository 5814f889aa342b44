//! Non-dominated sorting and crowding distance against brute force.

use evotrace::operators::{crowding_distance, fast_nondominated_sort};
use proptest::prelude::*;

fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Peels fronts by repeatedly taking the points no remaining point dominates.
fn brute_force_fronts(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Coordinates drawn from a small grid so ties and duplicates are common.
fn point_set() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4).prop_flat_map(|m| {
        prop::collection::vec(prop::collection::vec((0u8..6).prop_map(f64::from), m), 0..=64)
    })
}

proptest! {
    #[test]
    fn matches_peeling(points in point_set()) {
        prop_assert_eq!(fast_nondominated_sort(&points), brute_force_fronts(&points));
    }

    #[test]
    fn fronts_partition_and_respect_dominance(points in point_set()) {
        let fronts = fast_nondominated_sort(&points);
        let mut rank = vec![usize::MAX; points.len()];
        for (r, front) in fronts.iter().enumerate() {
            for &i in front {
                prop_assert_eq!(rank[i], usize::MAX);
                rank[i] = r;
            }
        }
        prop_assert!(rank.iter().all(|&r| r != usize::MAX));
        for i in 0..points.len() {
            for j in 0..points.len() {
                if dominates(&points[i], &points[j]) {
                    prop_assert!(rank[i] < rank[j]);
                }
            }
            if rank[i] > 0 {
                let prev = &fronts[rank[i] - 1];
                prop_assert!(prev.iter().any(|&j| dominates(&points[j], &points[i])));
            }
        }
    }

    #[test]
    fn crowding_marks_extremes_infinite(front in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 3..20)) {
        let d = crowding_distance(&front);
        for j in 0..2 {
            let lo = front.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
            let first_min = front.iter().position(|p| p[j] == lo).unwrap();
            prop_assert_eq!(d[first_min], f64::INFINITY);
        }
        prop_assert!(d.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn crowding_interior_value() {
    let front = [[0.0, 4.0], [1.0, 2.0], [3.0, 1.0], [4.0, 0.0]];
    let d = crowding_distance(&front);
    assert_eq!(d[0], f64::INFINITY);
    assert_eq!(d[3], f64::INFINITY);
    // (3 - 0)/4 + (4 - 1)/4 for the second point, (4 - 1)/4 + (2 - 0)/4 for the third.
    assert!((d[1] - 1.5).abs() < 1e-12);
    assert!((d[2] - 1.25).abs() < 1e-12);
}
