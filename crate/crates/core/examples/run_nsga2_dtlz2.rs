// Runs NSGA-II on three-objective DTLZ2 and prints the quality series.
//
// ```bash
// cargo run --release -p evotrace --example run_nsga2_dtlz2
// ```

use evotrace::{engine, validate_run_log, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = ProblemSpec::dtlz2(3);
    let config = RunConfig::new(40, 30, 7);
    let log = engine::run(&problem, Algorithm::Nsga2, &config, None)?;

    println!("{} individuals, {} evaluations", log.individuals.len(), log.total_evaluations());
    println!("gen      igd       hv");
    for q in log.quality_series.iter().step_by(5) {
        println!("{:>3} {:>8.4} {:>8.4}", q.generation, q.igd, q.hv);
    }
    let first = &log.quality_series[0];
    let last = log.quality_series.last().expect("30 generations");
    assert!(last.igd < first.igd, "IGD should improve");

    let violations = validate_run_log(&log);
    assert!(violations.is_empty(), "{violations:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
