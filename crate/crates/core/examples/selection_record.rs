// Inspects the two-level selection record of an SMS-EMOA generation:
// prioritized groups (non-dominated fronts) and hypervolume-contribution
// scores within each group.

use evotrace::{engine, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let log = engine::run(&ProblemSpec::zdt1(), Algorithm::SmsEmoa, &RunConfig::new(20, 15, 3), None)?;
    let g = log.generation(15).expect("generation 15");
    let record = &g.selection;

    println!("prioritized: {}, {} candidates", record.prioritized, record.candidate_count());
    for group in &record.groups {
        let best = group.members.first().map_or(f64::NAN, |e| e.fitness_score);
        println!(
            "rank {:>2}: {:>2} members, {:>2} survive, top score {best:.3e}",
            group.rank,
            group.members.len(),
            group.survivor_count()
        );
    }
    let violations = record.violations(log.config.mu);
    assert!(violations.is_empty(), "{violations:?}");
    assert_eq!(record.survivors(), g.population_ids);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
