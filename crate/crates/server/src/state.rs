use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::SystemTime;

use evotrace::projection::{fit_tsne, DensityGrid, PcaModel, TsneConfig, TsneEmbedding};
use evotrace::store::{self, load_projection, read_manifest, save_projection};
use evotrace::views::{range_decisions, reference_layout, DEFAULT_RANGE_CAP};
use evotrace::{Algorithm, ProblemSpec, RunLog};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use tokio::sync::OnceCell;

use crate::error::ApiError;

const DEFAULT_CACHE_BUDGET: usize = 256 << 20;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub runs_dir: PathBuf,
    /// Largest generation range one detail request may cover.
    pub range_cap: usize,
    pub tsne: TsneConfig,
    /// Approximate bytes of embeddings kept in memory.
    pub cache_budget: usize,
}

impl ServerConfig {
    pub fn new(runs_dir: impl Into<PathBuf>) -> Self {
        Self {
            runs_dir: runs_dir.into(),
            range_cap: DEFAULT_RANGE_CAP,
            tsne: TsneConfig::default(),
            cache_budget: DEFAULT_CACHE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub status: RunStatus,
    pub problem: Option<ProblemSpec>,
    pub algorithm: Option<Algorithm>,
    pub mu: Option<usize>,
    pub generations: Option<usize>,
    pub seed: Option<u64>,
    pub individuals: Option<usize>,
    /// Why the run is listed as invalid.
    pub error: Option<String>,
}

fn count_lines(path: &Path) -> std::io::Result<usize> {
    let mut n = 0;
    for line in BufReader::new(fs::File::open(path)?).lines() {
        if !line?.trim().is_empty() {
            n += 1;
        }
    }
    Ok(n)
}

fn summarize(name: String, dir: &Path) -> RunSummary {
    let invalid = |name: String, error: String| RunSummary {
        name,
        status: RunStatus::Invalid,
        problem: None,
        algorithm: None,
        mu: None,
        generations: None,
        seed: None,
        individuals: None,
        error: Some(error),
    };
    let manifest = match read_manifest(dir) {
        Ok(m) => m,
        Err(e) => return invalid(name, e.to_string()),
    };
    // Cheap structural check; full validation happens when the run is opened.
    for (file, expected) in [
        (store::INDIVIDUALS, manifest.counts.individuals),
        (store::GENERATIONS, manifest.counts.generations),
    ] {
        match count_lines(&dir.join(file)) {
            Ok(n) if n == expected => {}
            Ok(n) => return invalid(name, format!("{file} has {n} records, manifest says {expected}")),
            Err(e) => return invalid(name, format!("{file}: {e}")),
        }
    }
    RunSummary {
        name,
        status: RunStatus::Ok,
        mu: Some(manifest.config.mu),
        generations: Some(manifest.counts.generations),
        seed: Some(manifest.seed),
        individuals: Some(manifest.counts.individuals),
        problem: Some(manifest.problem),
        algorithm: Some(manifest.algorithm),
        error: None,
    }
}

/// Every subdirectory of `runs_dir`, sorted by name. Directories that fail
/// to parse are reported with [`RunStatus::Invalid`].
pub fn list_runs(runs_dir: &Path) -> std::io::Result<Vec<RunSummary>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(runs_dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with('.') || !entry.file_type()?.is_dir() {
            continue;
        }
        out.push(summarize(name, &entry.path()));
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Serialize)]
struct TsneKey<'a> {
    from: usize,
    to: usize,
    config: &'a TsneConfig,
}

/// Embedding of the decision vectors of generations `from..=to`, read from
/// the run's projection cache when present. The flag is true on a cache hit.
pub fn embedding_for_range(
    dir: &Path,
    log: &RunLog,
    from: usize,
    to: usize,
    config: &TsneConfig,
) -> evotrace::Result<(TsneEmbedding, bool)> {
    let key = TsneKey { from, to, config };
    if let Some(e) = load_projection::<_, TsneEmbedding>(dir, "tsne", &key)? {
        return Ok((e, true));
    }
    let points = range_decisions(log, from, to);
    let embedding = fit_tsne(&points, config, None)?;
    if let Err(e) = save_projection(dir, "tsne", &key, &embedding) {
        tracing::warn!("could not persist embedding: {e}");
    }
    Ok((embedding, false))
}

pub(crate) struct LoadedRun {
    pub dir: PathBuf,
    pub log: RunLog,
    pub pca: PcaModel,
    pub density: DensityGrid,
    modified: Option<SystemTime>,
}

struct Slot {
    cell: Arc<OnceCell<Arc<TsneEmbedding>>>,
    bytes: usize,
    last_used: u64,
}

#[derive(Default)]
struct EmbeddingCache {
    slots: HashMap<String, Slot>,
    clock: u64,
    total: usize,
}

impl EmbeddingCache {
    fn touch(&mut self, key: &str) -> Arc<OnceCell<Arc<TsneEmbedding>>> {
        self.clock += 1;
        let clock = self.clock;
        let slot = self.slots.entry(key.to_owned()).or_insert_with(|| Slot {
            cell: Arc::new(OnceCell::new()),
            bytes: 0,
            last_used: clock,
        });
        slot.last_used = clock;
        slot.cell.clone()
    }

    fn settle(&mut self, key: &str, bytes: usize, budget: usize) {
        if let Some(slot) = self.slots.get_mut(key) {
            if slot.bytes == 0 {
                slot.bytes = bytes;
                self.total += bytes;
            }
        }
        while self.total > budget {
            let victim = self
                .slots
                .iter()
                .filter(|(k, s)| k.as_str() != key && s.bytes > 0)
                .min_by_key(|(_, s)| s.last_used)
                .map(|(k, _)| k.clone());
            let Some(victim) = victim else { break };
            let slot = self.slots.remove(&victim).expect("present");
            self.total -= slot.bytes;
        }
    }
}

/// Shared server state: configuration, opened runs and fitted embeddings.
pub struct AppState {
    pub config: ServerConfig,
    runs: Mutex<HashMap<String, Arc<LoadedRun>>>,
    embeddings: Mutex<EmbeddingCache>,
}

fn manifest_mtime(dir: &Path) -> Option<SystemTime> {
    fs::metadata(dir.join(store::MANIFEST)).and_then(|m| m.modified()).ok()
}

impl AppState {
    pub fn new(config: ServerConfig) -> Arc<Self> {
        Arc::new(Self { config, runs: Mutex::new(HashMap::new()), embeddings: Mutex::new(EmbeddingCache::default()) })
    }

    fn run_dir(&self, id: &str) -> Result<PathBuf, ApiError> {
        let single = Path::new(id).components().count() == 1;
        if id.is_empty() || id.starts_with('.') || !single || id.contains(['/', '\\']) {
            return Err(ApiError::unknown_run(id));
        }
        let dir = self.config.runs_dir.join(id);
        if !dir.is_dir() {
            return Err(ApiError::unknown_run(id));
        }
        Ok(dir)
    }

    /// Opens (or reuses) a run. A run is reloaded when its manifest changed.
    pub(crate) async fn run(&self, id: &str) -> Result<Arc<LoadedRun>, ApiError> {
        let dir = self.run_dir(id)?;
        let modified = manifest_mtime(&dir);
        if let Some(run) = self.runs.lock().get(id) {
            if run.modified == modified {
                return Ok(run.clone());
            }
        }
        let loaded = tokio::task::spawn_blocking(move || -> evotrace::Result<LoadedRun> {
            let log = store::load_run(&dir)?;
            let (pca, density) = reference_layout(&log)?;
            Ok(LoadedRun { dir, log, pca, density, modified })
        })
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
        let loaded = Arc::new(loaded);
        self.runs.lock().insert(id.to_owned(), loaded.clone());
        Ok(loaded)
    }

    /// Embedding for `from..=to`; concurrent identical requests share one
    /// fit. The flag is true when this request did not run the fit itself.
    pub(crate) async fn embedding(
        &self,
        id: &str,
        run: &Arc<LoadedRun>,
        from: usize,
        to: usize,
    ) -> Result<(Arc<TsneEmbedding>, bool), ApiError> {
        let key = format!("{id}/{from}/{to}");
        let cell = self.embeddings.lock().touch(&key);
        let mut fitted = false;
        let embedding = cell
            .get_or_try_init(|| async {
                let run = run.clone();
                let config = self.config.tsne.clone();
                let (e, hit) = tokio::task::spawn_blocking(move || embedding_for_range(&run.dir, &run.log, from, to, &config))
                    .await
                    .map_err(|e| ApiError::internal(e.to_string()))??;
                fitted = !hit;
                Ok::<_, ApiError>(Arc::new(e))
            })
            .await?
            .clone();
        let bytes = embedding.coordinates.len() * std::mem::size_of::<[f64; 2]>() + 128;
        self.embeddings.lock().settle(&key, bytes, self.config.cache_budget);
        Ok((embedding, !fitted))
    }
}
