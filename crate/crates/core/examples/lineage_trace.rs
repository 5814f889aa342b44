// Traces the ancestry of two final survivors and finds their closest
// common ancestor.

use evotrace::lineage::{ancestors, common_ancestor, life_span};
use evotrace::{engine, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let log = engine::run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(24, 12, 11), None)?;
    let last = log.population_at(12).expect("final population");
    let (a, b) = (last[0], last[last.len() - 1]);

    for id in [a, b] {
        let span = life_span(&log, id)?;
        let tree = ancestors(&log, id, Some(4))?;
        println!(
            "{id}: born {}, died {:?}; {} ancestors within 4 generations, depth {}",
            span.birth,
            span.death,
            tree.nodes.len() - 1,
            tree.depth()
        );
    }
    match common_ancestor(&log, &[a, b])? {
        Some(ca) => println!("closest common ancestor {} at generation {}", ca.id, ca.generation),
        None => println!("no common ancestor"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
