//! HTTP query API and command-line front end over stored evotrace runs.
//!
//! The API is read-only: every payload is derived from a run directory
//! written by [`evotrace::store::save_run`]. Decision-space embeddings are
//! fitted on demand, shared between concurrent identical requests, kept in
//! an in-memory LRU and persisted under the run's `projections/` directory.

mod api;
mod cli;
mod error;
mod state;

pub use api::router;
pub use cli::cli_main;
pub use error::ApiError;
pub use state::{embedding_for_range, list_runs, AppState, RunStatus, RunSummary, ServerConfig};
