//! Command-line definitions and subcommand handlers.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use swarmcluster::data::default_cache_dir;
use swarmcluster::{Algorithm, AlgorithmOptions, ChaoticMapKind, ObjectiveMode, Registry};

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::fetch::{ensure_local, FetchStatus, HttpTransport};
use crate::plot::{render_svg, Series};
use crate::records::{append_record, load_records, load_trace, write_trace};
use crate::runner::{execute, prepare_named, run_grid, summary_text, write_outcome, RunSettings};
use crate::stats::{render_report, report_from_average_ranks, report_from_records, Metric};

#[derive(Debug, Parser)]
#[command(name = "swarmcluster", version, about = "Seeded clustering benchmarks for ChOA, GNDA, ChOAGNDA and K-means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One seeded run on one dataset.
    Run(RunArgs),
    /// The full dataset x algorithm x run grid from a config file.
    Bench(BenchArgs),
    /// Friedman test and post-hoc comparisons over a results file.
    Stats(StatsArgs),
    /// Convergence plot (SVG) from trace files.
    Plot(PlotArgs),
    /// Download remote datasets into the cache.
    Fetch(FetchArgs),
    /// Registered datasets, algorithms and chaotic maps.
    List,
}

#[derive(Debug, Args)]
pub struct CacheArg {
    /// Download cache (default: $SWARMCLUSTER_CACHE or ~/.cache/swarmcluster).
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
}

impl CacheArg {
    fn resolve(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(default_cache_dir)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub algo: String,
    #[arg(long)]
    pub dataset: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Chaotic map for the ChOA variants.
    #[arg(long, default_value = "gauss")]
    pub chaos: String,
    #[arg(long, default_value_t = 60)]
    pub pop: usize,
    /// Iteration budget (default: 900 for UCI sets, 200 for shape sets).
    #[arg(long)]
    pub iters: Option<usize>,
    /// Random-agent guidance when |a| > 1 in the leader-guided branch.
    #[arg(long)]
    pub strict_alg1: bool,
    /// Drop the GNDA phase from choagnda.
    #[arg(long)]
    pub no_gnda: bool,
    /// Drop opposition-based learning from choagnda.
    #[arg(long)]
    pub no_obl: bool,
    #[arg(long, default_value = "distance")]
    pub objective: String,
    /// Output directory for the trace and the appended record.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Trace file path (default: <out>/traces/<dataset>_<algo>_seed<seed>.csv).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub cache: CacheArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's worker count.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Overrides the config's output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cache: CacheArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Results file written by `bench`.
    #[arg(long, conflicts_with = "average_ranks", required_unless_present = "average_ranks")]
    pub results: Option<PathBuf>,
    /// `algorithm,average_rank` file instead of a results file.
    #[arg(long, requires = "datasets")]
    pub average_ranks: Option<PathBuf>,
    /// Number of datasets behind `--average-ranks`.
    #[arg(long)]
    pub datasets: Option<usize>,
    #[arg(long, default_value = "sicd")]
    pub metric: String,
    /// Control algorithm for the post-hoc z-tests.
    #[arg(long)]
    pub control: Option<String>,
    /// Holm step-down adjustment of post-hoc p-values.
    #[arg(long)]
    pub holm: bool,
    /// Where to write the JSON report (default: next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(required = true)]
    pub traces: Vec<PathBuf>,
    #[arg(long, default_value = "convergence.svg")]
    pub out: PathBuf,
    /// Legend labels, one per trace (default: file stems).
    #[arg(long = "label")]
    pub labels: Vec<String>,
    #[arg(long, default_value = "Convergence")]
    pub title: String,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Datasets to fetch (default: every remote dataset).
    pub names: Vec<String>,
    #[command(flatten)]
    pub cache: CacheArg,
}

fn io_out(e: std::io::Error) -> BenchError {
    BenchError::Internal(format!("writing output: {e}"))
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Run(a) => cmd_run(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Stats(a) => cmd_stats(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
        Command::Fetch(a) => cmd_fetch(&a, out),
        Command::List => cmd_list(out),
    }
}

pub fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let algorithm: Algorithm = a.algo.parse()?;
    let chaos: ChaoticMapKind = a.chaos.parse()?;
    let mode: ObjectiveMode = a.objective.parse()?;
    if algorithm != Algorithm::ChoaGnda && (a.no_gnda || a.no_obl) {
        return Err(BenchError::usage("--no-gnda and --no-obl apply to --algo choagnda only"));
    }
    let registry = Registry::builtin();
    let cache = a.cache.resolve();
    let dataset = prepare_named(&registry, &a.dataset, Some(&cache))?;
    let settings = RunSettings {
        algorithm,
        options: AlgorithmOptions {
            chaos,
            strict_alg1: a.strict_alg1,
            gnda: !a.no_gnda,
            obl: !a.no_obl,
            mode,
            ..Default::default()
        },
        population: a.pop,
        iterations: a.iters.unwrap_or(dataset.default_iterations),
        seed: a.seed,
        run: 0,
    };
    let o = execute(&dataset, &settings)?;
    let trace_path = a.trace.clone().unwrap_or_else(|| {
        a.out
            .join("traces")
            .join(format!("{}_{}_seed{}.csv", dataset.name, algorithm.name(), a.seed))
    });
    write_trace(&trace_path, &o.trace)?;
    std::fs::create_dir_all(&a.out).map_err(|e| BenchError::io(&a.out, e))?;
    append_record(&a.out.join("runs.csv"), &o.record)?;
    let er = o
        .record
        .error_rate_pct
        .map(|v| format!("{v:.2}%"))
        .unwrap_or_else(|| "n/a".into());
    writeln!(
        out,
        "{} on {} (seed {}): best SICD {:.6}, ER {er}, {} iterations, {} evaluations\ntrace: {}",
        algorithm,
        dataset.name,
        a.seed,
        o.record.best_sicd,
        o.record.iterations,
        o.record.evaluations,
        trace_path.display()
    )
    .map_err(io_out)
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = ExperimentConfig::load(&a.config)?;
    if let Some(w) = a.workers {
        config.workers = Some(w);
    }
    if let Some(o) = &a.out {
        config.output_dir = o.clone();
    }
    let registry = Registry::builtin();
    let resolved = config.resolve(&registry)?;
    let cache = a.cache.resolve();
    let outcome = run_grid(&resolved, &registry, Some(&cache))?;
    let files = write_outcome(&resolved.output_dir, &outcome)?;
    write!(out, "{}", summary_text(&outcome)).map_err(io_out)?;
    writeln!(out, "results: {}\nsummary: {}", files.results.display(), files.summary.display()).map_err(io_out)?;
    if let Some(f) = files.failures {
        writeln!(out, "{} cell(s) failed; see {}", outcome.failures.len(), f.display()).map_err(io_out)?;
        for fail in &outcome.failures {
            writeln!(out, "  {}/{}/{}: {}", fail.dataset, fail.algorithm, fail.run, fail.message).map_err(io_out)?;
        }
    }
    Ok(())
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().unwrap_or(Path::new(".")).join(name)
}

pub fn cmd_stats(a: &StatsArgs, out: &mut dyn Write) -> Result<()> {
    let (report, input) = match (&a.results, &a.average_ranks) {
        (Some(results), _) => {
            let metric: Metric = a.metric.parse()?;
            let records = load_records(results)?;
            if records.is_empty() {
                return Err(BenchError::usage(format!("{} has no rows", results.display())));
            }
            (report_from_records(&records, metric, a.control.as_deref(), a.holm)?, results)
        }
        (None, Some(ranks)) => {
            let text = std::fs::read_to_string(ranks).map_err(|e| BenchError::io(ranks, e))?;
            let n = a.datasets.ok_or_else(|| BenchError::usage("--average-ranks needs --datasets"))?;
            (report_from_average_ranks(&text, ranks, n, a.control.as_deref(), a.holm)?, ranks)
        }
        (None, None) => return Err(BenchError::usage("give --results or --average-ranks")),
    };
    let path = a.out.clone().unwrap_or_else(|| sibling(input, "stats.json"));
    let json = serde_json::to_string_pretty(&report).map_err(|e| BenchError::Internal(e.to_string()))?;
    std::fs::write(&path, json + "\n").map_err(|e| BenchError::io(&path, e))?;
    write!(out, "{}", render_report(&report)).map_err(io_out)?;
    writeln!(out, "report: {}", path.display()).map_err(io_out)
}

pub fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    if !a.labels.is_empty() && a.labels.len() != a.traces.len() {
        return Err(BenchError::usage(format!(
            "{} labels for {} traces",
            a.labels.len(),
            a.traces.len()
        )));
    }
    let mut series = Vec::with_capacity(a.traces.len());
    for (i, p) in a.traces.iter().enumerate() {
        let label = a.labels.get(i).cloned().unwrap_or_else(|| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("trace {}", i + 1))
        });
        series.push(Series {
            label,
            values: load_trace(p)?,
        });
    }
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    std::fs::write(&a.out, render_svg(&series, &a.title)).map_err(|e| BenchError::io(&a.out, e))?;
    writeln!(out, "plot: {}", a.out.display()).map_err(io_out)
}

pub fn cmd_fetch(a: &FetchArgs, out: &mut dyn Write) -> Result<()> {
    let registry = Registry::builtin();
    let cache = a.cache.resolve();
    let specs: Vec<_> = if a.names.is_empty() {
        registry
            .specs()
            .iter()
            .filter(|s| matches!(s.source, swarmcluster::data::DataSource::Url(_)))
            .collect()
    } else {
        a.names.iter().map(|n| registry.get(n)).collect::<swarmcluster::Result<_>>()?
    };
    let transport = HttpTransport::default();
    let mut first_err = None;
    for spec in specs {
        let status = ensure_local(spec, &cache, &transport).and_then(|s| {
            // a fresh download still has to parse with the expected counts
            swarmcluster::load_dataset::<f64>(spec, Some(&cache)).map(|_| s)
        });
        match status {
            Ok(s) => {
                let what = match s {
                    FetchStatus::Bundled => "bundled",
                    FetchStatus::LocalFile => "local file",
                    FetchStatus::Cached => "cached",
                    FetchStatus::Downloaded => "downloaded",
                };
                writeln!(out, "{:<12} {what}", spec.name).map_err(io_out)?;
            }
            Err(e) => {
                writeln!(out, "{:<12} FAILED: {e}", spec.name).map_err(io_out)?;
                first_err.get_or_insert(e);
            }
        }
    }
    writeln!(out, "cache: {}", cache.display()).map_err(io_out)?;
    match first_err {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

pub fn cmd_list(out: &mut dyn Write) -> Result<()> {
    let registry = Registry::builtin();
    writeln!(out, "{:<12} {:<6} {:>9} {:>9} {:>8}  source", "dataset", "family", "instances", "features", "classes")
        .map_err(io_out)?;
    for s in registry.specs() {
        let (n, d, c) = s
            .expected
            .map(|e| (e.n_instances.to_string(), e.n_features.to_string(), e.n_classes.to_string()))
            .unwrap_or_else(|| ("?".into(), "?".into(), "?".into()));
        let source = match &s.source {
            swarmcluster::data::DataSource::Bundled(_) => "bundled".to_string(),
            swarmcluster::data::DataSource::Path(p) => p.display().to_string(),
            swarmcluster::data::DataSource::Url(u) => u.clone(),
        };
        let family = format!("{:?}", s.family).to_ascii_lowercase();
        writeln!(out, "{:<12} {:<6} {n:>9} {d:>9} {c:>8}  {source}", s.name, family).map_err(io_out)?;
    }
    let algos: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
    let maps: Vec<&str> = ChaoticMapKind::ALL.iter().map(|m| m.name()).collect();
    writeln!(out, "\nalgorithms: {}\nchaotic maps: {}", algos.join(", "), maps.join(", ")).map_err(io_out)
}
