use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use evotrace::metrics::quality_point;
use evotrace::projection::TsneConfig;
use evotrace::rng::{stream, Stream};
use evotrace::store::{load_run, load_run_with, save_run};
use evotrace::views::{check_range, DEFAULT_RANGE_CAP};
use evotrace::{engine, validate_run_log, Algorithm, ProblemKind, ProblemSpec, QualityPoint, RunConfig, RunLog};

use crate::state::{embedding_for_range, AppState, ServerConfig};

#[derive(Debug, Parser)]
#[command(name = "evotrace", version, about = "Instrumented multi-objective evolutionary runs and their analysis API")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an algorithm on a benchmark problem and save the full log.
    Run {
        #[arg(long)]
        problem: ProblemKind,
        #[arg(long, default_value = "nsga2")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 100)]
        pop: usize,
        #[arg(long, default_value_t = 250)]
        generations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mating pairs per generation (default: pop / 2).
        #[arg(long)]
        lambda: Option<usize>,
        /// Probability that a crossover offspring is mutated.
        #[arg(long)]
        mutation_prob: Option<f64>,
        /// Objectives (default 3; ZDT1 always has 2).
        #[arg(long)]
        m: Option<usize>,
        /// Decision variables (default: the problem's conventional size).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the quality series (generation,igd,hv,sp,ms) as CSV.
    Measures {
        dir: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Recompute every measure from the stored populations instead of
        /// reading the stored series.
        #[arg(long)]
        recompute: bool,
    },
    /// Check a stored run against every log invariant.
    Validate { dir: PathBuf },
    /// Serve the query API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, env = "EVOTRACE_RUNS_DIR", default_value = "runs")]
        runs_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANGE_CAP)]
        range_cap: usize,
    },
    /// Fit and cache the decision-space embedding of a generation range.
    Project {
        dir: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 30.0)]
        perplexity: f64,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = DEFAULT_RANGE_CAP)]
        range_cap: usize,
    },
}

/// Entry point of the `evotrace` binary; returns the process exit code
/// (0 success, 1 runtime failure, 2 usage error).
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

type CliResult = Result<i32, Box<dyn std::error::Error>>;

fn execute(command: Command) -> CliResult {
    match command {
        Command::Run { problem, algorithm, pop, generations, seed, lambda, mutation_prob, m, n, out } => {
            let m = if problem == ProblemKind::Zdt1 { m.unwrap_or(2) } else { m.unwrap_or(3) };
            let spec = ProblemSpec::new(problem, n.unwrap_or_else(|| problem.default_n(m)), m)?;
            let mut config = RunConfig::new(pop, generations, seed);
            if let Some(l) = lambda {
                config.operators.lambda = l;
            }
            if let Some(p) = mutation_prob {
                config.operators.mutation_probability = p;
            }
            let log = engine::run(&spec, algorithm, &config, None)?;
            let manifest = save_run(&log, &out)?;
            let last = log.quality_series.last();
            println!(
                "{} on {} (n={}, m={}): {} generations, {} individuals, final igd {}",
                algorithm,
                spec.name,
                spec.n,
                spec.m,
                manifest.counts.generations,
                manifest.counts.individuals,
                last.map_or("n/a".into(), |q| format!("{:.6}", q.igd))
            );
            println!("saved to {}", out.display());
            Ok(0)
        }
        Command::Measures { dir, csv, recompute } => {
            let log = load_run(&dir)?;
            let series = if recompute { recompute_series(&log)? } else { log.quality_series.clone() };
            let sink: Box<dyn std::io::Write> = match &csv {
                Some(path) => Box::new(std::fs::File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            write_csv(sink, &series)?;
            if let Some(path) = csv {
                eprintln!("{} rows written to {}", series.len(), path.display());
            }
            Ok(0)
        }
        Command::Validate { dir } => {
            let log = load_run_with(&dir, true)?;
            let violations = validate_run_log(&log);
            for v in &violations {
                println!("{v}");
            }
            println!("{} violations", violations.len());
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Serve { port, host, runs_dir, range_cap } => {
            let mut config = ServerConfig::new(runs_dir);
            config.range_cap = range_cap;
            serve(config, SocketAddr::new(host, port))?;
            Ok(0)
        }
        Command::Project { dir, from, to, perplexity, iterations, range_cap } => {
            let to = to.unwrap_or(from);
            let log = load_run(&dir)?;
            check_range(&log, from, to, range_cap)?;
            let config = TsneConfig { perplexity, iterations, ..TsneConfig::default() };
            let (embedding, hit) = embedding_for_range(&dir, &log, from, to, &config)?;
            println!(
                "generations {from}..={to}: {} points, {:?}, kl {:.6}{}",
                embedding.coordinates.len(),
                embedding.mode,
                embedding.kl_divergence,
                if hit { " (cached)" } else { "" }
            );
            Ok(0)
        }
    }
}

fn recompute_series(log: &RunLog) -> evotrace::Result<Vec<QualityPoint>> {
    let reference = log
        .reference
        .as_ref()
        .ok_or_else(|| evotrace::Error::Contract("run has no reference set".into()))?;
    (1..=log.generation_count())
        .map(|k| {
            let population = log.objectives_of(&log.population_at(k).expect("in range"));
            quality_point(k, &population, reference, &mut stream(log.config.seed, Stream::Measures { generation: k }))
        })
        .collect()
}

fn write_csv(sink: impl std::io::Write, series: &[QualityPoint]) -> Result<(), Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["generation", "igd", "hv", "sp", "ms"])?;
    for q in series {
        w.write_record([q.generation.to_string(), q.igd.to_string(), q.hv.to_string(), q.sp.to_string(), q.ms.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn serve(config: ServerConfig, addr: SocketAddr) -> Result<(), Box<dyn std::error::Error>> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .try_init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        tracing::info!("serving {} on http://{}", config.runs_dir.display(), listener.local_addr()?);
        let app = crate::api::router(AppState::new(config));
        axum::serve(listener, app).await?;
        Ok(())
    })
}
