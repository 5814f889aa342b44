use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::routing::get;
use axum::{Json, Router};
use evotrace::views::{
    check_range, generation_detail, lineage_query, operator_detail, run_overview, GenerationDetail, LineageView,
    OperatorDetail, Overview, SizeMeasure, SortKey, SortOrder,
};
use evotrace::IndividualId;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::state::{list_runs, AppState, RunSummary};

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/runs", get(runs))
        .route("/runs/{id}/overview", get(overview))
        .route("/runs/{id}/generations", get(generations))
        .route("/runs/{id}/lineage", get(lineage))
        .route("/runs/{id}/operators/{k}", get(operators))
        .with_state(state)
}

async fn runs(State(state): State<Arc<AppState>>) -> ApiResult<Vec<RunSummary>> {
    let dir = state.config.runs_dir.clone();
    let list = tokio::task::spawn_blocking(move || list_runs(&dir))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
        .map_err(|e| ApiError::internal(format!("cannot read runs directory: {e}")))?;
    Ok(Json(list))
}

async fn overview(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Overview> {
    let run = state.run(&id).await?;
    Ok(Json(run_overview(&run.log)))
}

#[derive(Debug, Deserialize)]
struct RangeQuery {
    from: usize,
    to: Option<usize>,
    size: Option<String>,
}

#[derive(Debug, Serialize)]
struct GenerationResponse {
    /// False only when this request ran the embedding fit.
    cached: bool,
    #[serde(flatten)]
    detail: GenerationDetail,
}

async fn generations(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<RangeQuery>,
) -> ApiResult<GenerationResponse> {
    let (from, to) = (q.from, q.to.unwrap_or(q.from));
    let size: SizeMeasure = q.size.as_deref().map(str::parse).transpose()?.unwrap_or_default();
    if to < from {
        return Err(ApiError::bad_request(format!("empty range {from}..={to}")));
    }
    let cap = state.config.range_cap;
    if to - from + 1 > cap {
        return Err(ApiError::new(
            axum::http::StatusCode::BAD_REQUEST,
            "range_too_large",
            format!("{} generations requested; at most {cap} can be shown at once", to - from + 1),
        ));
    }
    let run = state.run(&id).await?;
    check_range(&run.log, from, to, cap)?;
    let (embedding, cached) = state.embedding(&id, &run, from, to).await?;
    let detail = tokio::task::spawn_blocking(move || {
        generation_detail(&run.log, from, to, size, cap, &run.pca, &embedding, &run.density)
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))??;
    Ok(Json(GenerationResponse { cached, detail }))
}

#[derive(Debug, Deserialize)]
struct LineageQuery {
    ids: String,
    from: Option<usize>,
}

fn parse_ids(raw: &str) -> Result<Vec<IndividualId>, ApiError> {
    let ids = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim_start_matches('#')
                .parse()
                .map(IndividualId)
                .map_err(|_| ApiError::bad_request(format!("bad individual id {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(ApiError::bad_request("ids must name at least one individual"));
    }
    Ok(ids)
}

async fn lineage(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<LineageQuery>,
) -> ApiResult<LineageView> {
    let ids = parse_ids(&q.ids)?;
    let run = state.run(&id).await?;
    Ok(Json(lineage_query(&run.log, &ids, q.from)?))
}

#[derive(Debug, Deserialize)]
struct OperatorQuery {
    sort: Option<String>,
    order: Option<String>,
}

async fn operators(
    State(state): State<Arc<AppState>>,
    Path((id, k)): Path<(String, usize)>,
    Query(q): Query<OperatorQuery>,
) -> ApiResult<OperatorDetail> {
    let sort = match q.sort.as_deref() {
        None => None,
        Some(key) => {
            let key: SortKey = key.parse()?;
            let order: SortOrder = q.order.as_deref().map(str::parse).transpose()?.unwrap_or(SortOrder::Ascending);
            Some((key, order))
        }
    };
    let run = state.run(&id).await?;
    Ok(Json(operator_detail(&run.log, k, sort)?))
}
