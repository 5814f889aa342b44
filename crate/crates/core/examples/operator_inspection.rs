// Operator-level detail of one generation: mating pairs sorted by parent
// distance, mutation deltas, and origin stacks per selection group.

use evotrace::views::{operator_detail, SortKey, SortOrder};
use evotrace::{engine, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let log = engine::run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(20, 6, 2), None)?;
    let detail = operator_detail(&log, 6, Some((SortKey::ParentDistance, SortOrder::Descending)))?;

    println!("{} pairs, {} mutations", detail.pairs.len(), detail.mutations.len());
    for pair in detail.pairs.iter().take(3) {
        println!(
            "{} x {}: parent distance {:.3}, beta {:.3}",
            pair.parent_a, pair.parent_b, pair.parent_distance, pair.spread_factor
        );
    }
    for group in &detail.groups {
        let stack: Vec<String> = group
            .stack
            .iter()
            .map(|s| format!("{}={}/{}", s.origin.as_str(), s.count.survived, s.count.total()))
            .collect();
        println!("rank {}: {}", group.rank, stack.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
