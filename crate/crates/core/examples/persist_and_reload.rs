// Saves a run to a directory, reads it back and resumes it.

use evotrace::engine::resume_run;
use evotrace::store::{load_run, read_measures, save_run};
use evotrace::{engine, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("evotrace-example-{}", std::process::id()));
    let log = engine::run(&ProblemSpec::dtlz1(3), Algorithm::Nsga2, &RunConfig::new(20, 10, 1), None)?;

    let manifest = save_run(&log, &dir)?;
    println!(
        "saved {} individuals over {} generations to {}",
        manifest.counts.individuals,
        manifest.counts.generations,
        dir.display()
    );
    let loaded = load_run(&dir)?;
    assert_eq!(loaded, log);

    let measures = read_measures(&dir)?;
    println!("last IGD {:.4}", measures.quality_series.last().map_or(f64::NAN, |q| q.igd));

    let longer = resume_run(&loaded, 5)?;
    println!("resumed to {} generations", longer.generation_count());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
