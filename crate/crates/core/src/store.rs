//! Directory format for run logs.
//!
//! ```text
//! <run>/
//!   manifest.json      format version, problem, algorithm, config, seed, counts
//!   individuals.jsonl  one Individual per line, ascending id
//!   generations.jsonl  one GenerationRecord per line, ascending index
//!   measures.json      quality series and origin statistics
//!   reference.json     reference set and hypervolume reference point
//!   projections/       cached layouts keyed by a content hash
//! ```
//!
//! Files are written to a temporary name and renamed into place, under an
//! exclusive `.lock` file. Serialization is canonical: struct fields in
//! declaration order and shortest round-trip floats, so saving the same log
//! twice yields identical bytes.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{Algorithm, RunConfig};
use crate::error::{Error, Result};
use crate::metrics::{origin_statistics, OriginStatistics};
use crate::model::{validate_run_log, GenerationRecord, Individual, QualityPoint, ReferenceSet, RunLog};
use crate::problems::ProblemSpec;

pub const FORMAT_VERSION: u32 = 1;

pub const MANIFEST: &str = "manifest.json";
pub const INDIVIDUALS: &str = "individuals.jsonl";
pub const GENERATIONS: &str = "generations.jsonl";
pub const MEASURES: &str = "measures.json";
pub const REFERENCE: &str = "reference.json";
pub const PROJECTIONS: &str = "projections";
const LOCK: &str = ".lock";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing file {0}")]
    Missing(PathBuf),
    #[error("{file}{}: {message}", .line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Parse { file: PathBuf, line: Option<usize>, message: String },
    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("{0} is locked by another writer")]
    Locked(PathBuf),
    #[error("stored run is inconsistent: {0}")]
    Inconsistent(String),
    #[error("stored run failed validation with {} violation(s)", .0.len())]
    Invalid(Vec<String>),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Store(StoreError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub individuals: usize,
    pub generations: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub seed: u64,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub quality_series: Vec<QualityPoint>,
    pub origin_statistics: Vec<OriginStatistics>,
}

struct LockGuard(PathBuf);

impl LockGuard {
    fn acquire(dir: &Path) -> Result<Self> {
        let path = dir.join(LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LockGuard(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(StoreError::Locked(dir.to_path_buf()).into()),
            Err(e) => Err(io_err(&path)(e)),
        }
    }
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

pub fn manifest_of(log: &RunLog) -> Manifest {
    Manifest {
        format_version: FORMAT_VERSION,
        problem: log.problem.clone(),
        algorithm: log.algorithm,
        config: log.config.clone(),
        seed: log.config.seed,
        counts: Counts {
            individuals: log.individuals.len(),
            generations: log.generations.len(),
            evaluations: log.total_evaluations(),
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("run types serialize");
    bytes.push(b'\n');
    bytes
}

fn to_jsonl<'a, T: Serialize + 'a>(items: impl IntoIterator<Item = &'a T>) -> Vec<u8> {
    let mut bytes = Vec::new();
    for item in items {
        serde_json::to_writer(&mut bytes, item).expect("run types serialize");
        bytes.push(b'\n');
    }
    bytes
}

/// Writes `log` into `dir` (created if needed) and returns its manifest.
/// An existing run of a different format version is never overwritten.
pub fn save_run(log: &RunLog, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let _lock = LockGuard::acquire(dir)?;
    let manifest_path = dir.join(MANIFEST);
    if manifest_path.exists() {
        let found = read_format_version(&manifest_path)?;
        if found != FORMAT_VERSION {
            return Err(StoreError::Version { found, expected: FORMAT_VERSION }.into());
        }
    }
    let reference = log
        .reference
        .clone()
        .map_or_else(|| ReferenceSet::from_objectives(log.problem.default_reference_set()), Ok)?;
    let manifest = manifest_of(log);
    let measures = Measures {
        quality_series: log.quality_series.clone(),
        origin_statistics: log.generations.iter().map(origin_statistics).collect(),
    };
    let files: [(&str, Vec<u8>); 5] = [
        (INDIVIDUALS, to_jsonl(&log.individuals)),
        (GENERATIONS, to_jsonl(&log.generations)),
        (MEASURES, to_json(&measures)),
        (REFERENCE, to_json(&reference)),
        (MANIFEST, to_json(&manifest)),
    ];

    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        for (name, bytes) in &files {
            let tmp = dir.join(format!("{name}.tmp"));
            written.push(tmp.clone());
            let mut f = BufWriter::new(File::create(&tmp).map_err(io_err(&tmp))?);
            f.write_all(bytes).map_err(io_err(&tmp))?;
            f.into_inner()
                .map_err(|e| io_err(&tmp)(e.into_error()))?
                .sync_all()
                .map_err(io_err(&tmp))?;
        }
        for (name, _) in &files {
            let tmp = dir.join(format!("{name}.tmp"));
            fs::rename(&tmp, dir.join(name)).map_err(io_err(&tmp))?;
        }
        let projections = dir.join(PROJECTIONS);
        fs::create_dir_all(&projections).map_err(io_err(&projections))
    })();
    if result.is_err() {
        for tmp in written {
            let _ = fs::remove_file(tmp);
        }
    }
    result.map(|_| manifest)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            StoreError::Missing(path.to_path_buf()).into()
        } else {
            io_err(path)(e)
        }
    })
}

fn parse_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        StoreError::Parse { file: path.to_path_buf(), line: Some(e.line()), message: e.to_string() }.into()
    })
}

fn parse_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::Store(StoreError::Missing(path.to_path_buf()))
        } else {
            io_err(path)(e)
        }
    })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| StoreError::Parse {
            file: path.to_path_buf(),
            line: Some(i + 1),
            message: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}

fn read_format_version(path: &Path) -> Result<u32> {
    #[derive(Deserialize)]
    struct Versioned {
        format_version: u32,
    }
    Ok(parse_json::<Versioned>(path)?.format_version)
}

/// Reads only the manifest, checking its format version.
pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    let found = read_format_version(&path)?;
    if found != FORMAT_VERSION {
        return Err(StoreError::Version { found, expected: FORMAT_VERSION }.into());
    }
    parse_json(&path)
}

pub fn read_measures(dir: &Path) -> Result<Measures> {
    parse_json(&dir.join(MEASURES))
}

/// Loads and validates a run; see [`load_run_with`] to skip validation.
pub fn load_run(dir: &Path) -> Result<RunLog> {
    load_run_with(dir, false)
}

/// Loads a run. Unless `force` is set, a log with any `validate_run_log`
/// violation is refused.
pub fn load_run_with(dir: &Path, force: bool) -> Result<RunLog> {
    let manifest = read_manifest(dir)?;
    let individuals: Vec<Individual> = parse_jsonl(&dir.join(INDIVIDUALS))?;
    let generations: Vec<GenerationRecord> = parse_jsonl(&dir.join(GENERATIONS))?;
    let measures = read_measures(dir)?;
    let reference: ReferenceSet = parse_json(&dir.join(REFERENCE))?;
    if individuals.len() != manifest.counts.individuals || generations.len() != manifest.counts.generations {
        return Err(StoreError::Inconsistent(format!(
            "manifest lists {} individuals / {} generations, files hold {} / {}",
            manifest.counts.individuals,
            manifest.counts.generations,
            individuals.len(),
            generations.len()
        ))
        .into());
    }
    let log = RunLog {
        problem: manifest.problem,
        algorithm: manifest.algorithm,
        config: manifest.config,
        individuals,
        generations,
        quality_series: measures.quality_series,
        reference: Some(reference),
    };
    if !force {
        let violations = validate_run_log(&log);
        if !violations.is_empty() {
            return Err(StoreError::Invalid(violations).into());
        }
    }
    Ok(log)
}

/// Hex SHA-256 of the canonical JSON of `key`.
pub fn content_hash<K: Serialize>(key: &K) -> String {
    let bytes = serde_json::to_vec(key).expect("cache keys serialize");
    hex::encode(Sha256::digest(bytes))
}

fn projection_path<K: Serialize>(dir: &Path, kind: &str, key: &K) -> PathBuf {
    dir.join(PROJECTIONS).join(format!("{kind}-{}.json", content_hash(key)))
}

/// Stores a cached projection under `projections/<kind>-<hash(key)>.json`.
pub fn save_projection<K: Serialize, T: Serialize>(dir: &Path, kind: &str, key: &K, value: &T) -> Result<PathBuf> {
    let path = projection_path(dir, kind, key);
    let parent = path.parent().expect("has parent");
    fs::create_dir_all(parent).map_err(io_err(parent))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(value).expect("projections serialize")).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(&path)(e)
    })?;
    Ok(path)
}

/// Returns `None` when no projection is cached for `key`.
pub fn load_projection<K: Serialize, T: DeserializeOwned>(dir: &Path, kind: &str, key: &K) -> Result<Option<T>> {
    let path = projection_path(dir, kind, key);
    if !path.exists() {
        return Ok(None);
    }
    parse_json(&path).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run;

    fn small() -> RunLog {
        run(&ProblemSpec::dtlz2(3), Algorithm::Nsga2, &RunConfig::new(10, 4, 1), None).unwrap()
    }

    #[test]
    fn round_trip_and_canonical_bytes() {
        let log = small();
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        let manifest = save_run(&log, &a).unwrap();
        assert_eq!(manifest.counts.generations, 4);
        let back = load_run(&a).unwrap();
        assert_eq!(back, log);
        save_run(&back, &b).unwrap();
        for name in [MANIFEST, INDIVIDUALS, GENERATIONS, MEASURES, REFERENCE] {
            assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
        }
        let lines = fs::read_to_string(a.join(INDIVIDUALS)).unwrap().lines().count();
        assert_eq!(lines, manifest.counts.individuals);
        assert!(!a.join(LOCK).exists());
    }

    #[test]
    fn truncated_jsonl_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        save_run(&small(), dir.path()).unwrap();
        let path = dir.path().join(GENERATIONS);
        let text = fs::read_to_string(&path).unwrap();
        let cut = text.len() - 40;
        fs::write(&path, &text[..cut]).unwrap();
        match load_run(dir.path()) {
            Err(Error::Store(StoreError::Parse { line: Some(4), .. })) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_mismatch_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        save_run(&small(), dir.path()).unwrap();
        let path = dir.path().join(MANIFEST);
        let text = fs::read_to_string(&path).unwrap().replace("\"format_version\": 1", "\"format_version\": 99");
        fs::write(&path, text).unwrap();
        assert!(matches!(load_run(dir.path()), Err(Error::Store(StoreError::Version { found: 99, .. }))));
        assert!(matches!(save_run(&small(), dir.path()), Err(Error::Store(StoreError::Version { .. }))));
    }

    #[test]
    fn missing_file_and_lock() {
        let dir = tempfile::tempdir().unwrap();
        save_run(&small(), dir.path()).unwrap();
        fs::remove_file(dir.path().join(REFERENCE)).unwrap();
        assert!(matches!(load_run(dir.path()), Err(Error::Store(StoreError::Missing(_)))));
        fs::write(dir.path().join(LOCK), b"").unwrap();
        assert!(matches!(save_run(&small(), dir.path()), Err(Error::Store(StoreError::Locked(_)))));
    }

    #[test]
    fn invalid_logs_need_force() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = small();
        log.generations[1].evaluations += 1;
        save_run(&log, dir.path()).unwrap();
        assert!(matches!(load_run(dir.path()), Err(Error::Store(StoreError::Invalid(_)))));
        assert_eq!(load_run_with(dir.path(), true).unwrap(), log);
    }

    #[test]
    fn projection_cache() {
        let dir = tempfile::tempdir().unwrap();
        let key = ("run", 1, 3);
        assert_eq!(load_projection::<_, Vec<f64>>(dir.path(), "tsne", &key).unwrap(), None);
        save_projection(dir.path(), "tsne", &key, &vec![1.5, f64::MIN_POSITIVE]).unwrap();
        let back: Vec<f64> = load_projection(dir.path(), "tsne", &key).unwrap().unwrap();
        assert_eq!(back, vec![1.5, f64::MIN_POSITIVE]);
    }
}
