//! # evotrace
//!
//! An instrumented multi-objective evolutionary optimizer. Every run records
//! the complete evolutionary process: the provenance of each individual, the
//! mating pairs and spread factors of every crossover, every mutation's
//! perturbation vector, and the grouped, scored outcome of each environmental
//! selection. On top of that log the crate computes the analysis views an
//! interactive frontend needs:
//!
//! - generation-level quality series (IGD, hypervolume, spacing, maximum spread)
//!   and four-origin survival statistics ([`metrics`]),
//! - aligned 2-D layouts of objective space (PCA fit on the reference set) and
//!   decision space (exact t-SNE over a union of generations) ([`projection`]),
//! - ancestry queries: lineage trees, life spans, closest common ancestors
//!   ([`lineage`]),
//! - per-operator detail payloads ([`views`]).
//!
//! Runs persist to a diffable directory of JSON / JSONL files ([`store`]).
//!
//! ```no_run
//! use evotrace::{engine, problems::ProblemSpec, Algorithm, RunConfig};
//!
//! let problem = ProblemSpec::dtlz2(3);
//! let config = RunConfig::new(100, 250, 42);
//! let log = engine::run(&problem, Algorithm::Nsga2, &config, None).unwrap();
//! println!("final igd = {}", log.quality_series.last().unwrap().igd);
//! ```

pub mod engine;
mod error;
pub mod lineage;
pub mod metrics;
pub mod model;
pub mod operators;
pub mod problems;
pub mod projection;
pub mod rng;
pub mod store;
pub mod views;

mod float_serde;

pub use engine::{Algorithm, RunConfig};
pub use error::{Error, Result};
pub use model::{
    dominates, validate_run_log, DecisionVector, GenerationRecord, Individual, IndividualId,
    MatingPair, MutationEvent, ObjectiveVector, Origin, QualityPoint, ReferenceSet, RunLog,
    SelectionEntry, SelectionGroup, SelectionRecord,
};
pub use operators::OperatorConfig;
pub use problems::{ProblemKind, ProblemSpec};
