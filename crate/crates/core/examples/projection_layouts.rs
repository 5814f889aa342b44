// Builds the two aligned layouts of a generation range: PCA of objectives
// (fitted on the reference set) and t-SNE of decision vectors (fitted on the
// union of the range), then assembles the scatterplot payload.

use evotrace::projection::{fit_tsne, TsneConfig};
use evotrace::views::{generation_detail, range_decisions, reference_layout, SizeMeasure, DEFAULT_RANGE_CAP};
use evotrace::{engine, Algorithm, ProblemSpec, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let log = engine::run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(30, 8, 5), None)?;
    let (pca, density) = reference_layout(&log)?;
    println!(
        "PCA explained variance {:.3} / {:.3}",
        pca.explained_variance[0], pca.explained_variance[1]
    );

    let (from, to) = (5, 7);
    let points = range_decisions(&log, from, to);
    let config = TsneConfig { perplexity: 10.0, iterations: 300, ..TsneConfig::default() };
    let embedding = fit_tsne(&points, &config, None)?;
    println!("t-SNE on {} points: {:?}, KL {:.4}", points.len(), embedding.mode, embedding.kl_divergence);

    let detail = generation_detail(&log, from, to, SizeMeasure::NearestReference, DEFAULT_RANGE_CAP, &pca, &embedding, &density)?;
    for slice in &detail.generations {
        let died = slice.survived.iter().filter(|s| !**s).count();
        println!("generation {}: {} candidates, {died} removed", slice.generation, slice.ids.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
