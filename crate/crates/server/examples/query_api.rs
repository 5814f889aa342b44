// Saves a run, then walks the analysis workflow through the HTTP API
// in-process: overview, a generation range, a lineage, one operator view.
//
// cargo run -p evotrace-server --example query_api

use axum::body::Body;
use axum::http::Request;
use evotrace::projection::TsneConfig;
use evotrace::{engine, store, Algorithm, ProblemSpec, RunConfig};
use evotrace_server::{router, AppState, ServerConfig};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

async fn fetch(app: &axum::Router, uri: &str) -> Result<Value, Box<dyn std::error::Error>> {
    let response = app.clone().oneshot(Request::get(uri).body(Body::empty())?).await?;
    let status = response.status();
    let body: Value = serde_json::from_slice(&response.into_body().collect().await?.to_bytes())?;
    if !status.is_success() {
        return Err(format!("{uri}: {status} {body}").into());
    }
    Ok(body)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let runs = std::env::temp_dir().join(format!("evotrace-api-example-{}", std::process::id()));
    let log = engine::run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(30, 20, 42), None)?;
    store::save_run(&log, &runs.join("demo"))?;

    let mut config = ServerConfig::new(&runs);
    config.tsne = TsneConfig { perplexity: 15.0, iterations: 300, ..TsneConfig::default() };
    let app = router(AppState::new(config));

    let result = tokio::runtime::Runtime::new()?.block_on(async {
        let listing = fetch(&app, "/runs").await?;
        println!("runs: {}", listing);

        let overview = fetch(&app, "/runs/demo/overview").await?;
        let igd = overview["igd"].as_array().map_or(0, Vec::len);
        println!("overview: {igd} generations, last HV {}", overview["hv"][igd - 1]);

        let detail = fetch(&app, "/runs/demo/generations?from=15&to=17&size=nearest_neighbor_objective").await?;
        println!(
            "generations 15..=17: embedding {} (cached: {})",
            detail["embedding"]["mode"], detail["cached"]
        );

        let mutant = log.generations[16]
            .mutation_events
            .iter()
            .map(|m| m.mutant_id)
            .find(|id| log.generations[16].population_ids.contains(id));
        if let Some(id) = mutant {
            let lineage = fetch(&app, &format!("/runs/demo/lineage?ids={}&from=5", id.0)).await?;
            println!("lineage of surviving mutant {id}: axis {}", lineage["axis"]);
        }

        let ops = fetch(&app, "/runs/demo/operators/17?sort=mutation_distance&order=desc").await?;
        println!(
            "generation 17: {} pairs, {} mutations, {} selection groups",
            ops["pairs"].as_array().map_or(0, Vec::len),
            ops["mutations"].as_array().map_or(0, Vec::len),
            ops["groups"].as_array().map_or(0, Vec::len)
        );
        Ok::<_, Box<dyn std::error::Error>>(())
    });
    std::fs::remove_dir_all(&runs)?;
    result
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
