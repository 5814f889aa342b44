//! Environmental selection against exhaustive oracles.

use evotrace::metrics::hypervolume_exact;
use evotrace::operators::{environmental_select, hv_contribution, Candidate};
use evotrace::{Algorithm, IndividualId};
use proptest::prelude::*;

fn candidates(points: &[Vec<f64>]) -> Vec<Candidate<'_>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| Candidate { id: IndividualId(i as u64), objective: p })
        .collect()
}

/// Mutually non-dominated points on a concave curve, jittered.
fn front(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(0.0f64..1.0, 3..=max).prop_map(|ts| {
        ts.into_iter()
            .map(|t| {
                let a = t * std::f64::consts::FRAC_PI_2;
                vec![a.cos(), a.sin()]
            })
            .collect()
    })
}

proptest! {
    /// Removing a single point from a front of size <= 8 discards the one
    /// whose loss (leave-one-out HV) is smallest.
    #[test]
    fn sms_emoa_removes_the_minimum_loss(points in front(8)) {
        let r = [1.1, 1.1];
        let mu = points.len() - 1;
        let record = environmental_select(&candidates(&points), mu, Algorithm::SmsEmoa, &r).unwrap();
        let removed = record.entries().find(|(_, e)| !e.survived).unwrap().1.individual_id.index();
        let total = hypervolume_exact(&points, &r);
        let loss = |i: usize| {
            let rest: Vec<_> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            total - hypervolume_exact(&rest, &r)
        };
        let best = (0..points.len()).map(loss).fold(f64::INFINITY, f64::min);
        prop_assert!(loss(removed) <= best + 1e-12);
    }

    #[test]
    fn contributions_equal_leave_one_out(points in front(8)) {
        let r = [1.1, 1.1];
        let total = hypervolume_exact(&points, &r);
        for (i, c) in hv_contribution(&points, &r).into_iter().enumerate() {
            let rest: Vec<_> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            prop_assert!((c - (total - hypervolume_exact(&rest, &r))).abs() < 1e-12);
        }
    }

    #[test]
    fn records_satisfy_invariants(
        points in prop::collection::vec(prop::collection::vec((0u8..8).prop_map(f64::from), 3), 2..40),
        frac in 0.1f64..1.0,
        sms in any::<bool>(),
    ) {
        let mu = ((points.len() as f64 * frac) as usize).max(1);
        let algorithm = if sms { Algorithm::SmsEmoa } else { Algorithm::Nsga2 };
        let record = environmental_select(&candidates(&points), mu, algorithm, &[9.0; 3]).unwrap();
        prop_assert!(record.violations(mu).is_empty(), "{:?}", record.violations(mu));
        prop_assert_eq!(record.candidate_count(), points.len());
    }
}

#[test]
fn three_objective_contribution_matches_leave_one_out() {
    let points = vec![vec![0.1, 0.5, 0.7], vec![0.4, 0.2, 0.6], vec![0.6, 0.6, 0.1], vec![0.3, 0.3, 0.3]];
    let r = [1.0; 3];
    let total = hypervolume_exact(&points, &r);
    for (i, c) in hv_contribution(&points, &r).into_iter().enumerate() {
        let rest: Vec<_> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        assert!((c - (total - hypervolume_exact(&rest, &r))).abs() < 1e-12);
    }
}
