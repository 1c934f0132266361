//! Single runs and the (dataset x algorithm x run) grid.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use swarmcluster::{
    error_rate, load_dataset, run_algorithm, Algorithm, AlgorithmOptions, ClusteringRun64, Dataset64, DatasetSpec,
    Registry, RunConfig,
};

use crate::config::ResolvedConfig;
use crate::error::{BenchError, Result};
use crate::records::{save_records, write_trace, RunRecord};
use crate::seed::derive_seed;
use crate::summary::{render_table, summarize, write_csv};

/// A dataset ready to run on, with its cluster count and default budget.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub name: String,
    pub data: Dataset64,
    pub k: usize,
    pub default_iterations: usize,
}

pub fn prepare(spec: &DatasetSpec, cache_dir: Option<&Path>) -> Result<Prepared> {
    let data: Dataset64 = load_dataset(spec, cache_dir)?;
    let k = spec
        .k()
        .or_else(|| data.labels().map(|_| data.n_classes()))
        .ok_or_else(|| BenchError::usage(format!("dataset `{}` has no known cluster count", spec.name)))?;
    Ok(Prepared {
        name: spec.name.clone(),
        data,
        k,
        default_iterations: spec.family.default_iterations(),
    })
}

pub fn prepare_named(registry: &Registry, name: &str, cache_dir: Option<&Path>) -> Result<Prepared> {
    prepare(registry.get(name)?, cache_dir)
}

#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub algorithm: Algorithm,
    pub options: AlgorithmOptions,
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    pub run: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub trace: Vec<f64>,
    pub result: ClusteringRun64,
}

pub fn execute(dataset: &Prepared, s: &RunSettings) -> Result<RunOutput> {
    let config = RunConfig {
        population_size: s.population,
        max_iterations: s.iterations,
        seed: s.seed,
        k_clusters: dataset.k,
    };
    let start = Instant::now();
    let result = run_algorithm(&dataset.data, s.algorithm, &config, &s.options)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let error_rate_pct = match dataset.data.labels() {
        Some(_) => Some(error_rate(&dataset.data, &result.assignment)?),
        None => None,
    };
    let trace = result.trace.best_so_far.clone();
    let record = RunRecord {
        dataset: dataset.name.clone(),
        algorithm: s.algorithm.name().to_string(),
        run: s.run,
        seed: s.seed,
        best_sicd: result.best_objective,
        error_rate_pct,
        iterations: result.iterations,
        evaluations: result.evaluations,
        wall_time_ms,
    };
    Ok(RunOutput { record, trace, result })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub dataset: String,
    pub algorithm: String,
    pub run: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct GridOutcome {
    /// Sorted by dataset, algorithm, run.
    pub runs: Vec<(RunRecord, Vec<f64>)>,
    pub failures: Vec<Failure>,
}

impl GridOutcome {
    pub fn records(&self) -> Vec<RunRecord> {
        self.runs.iter().map(|(r, _)| r.clone()).collect()
    }
}

/// Runs every cell of the grid on a worker pool. Cell failures, including
/// datasets that fail to load, are collected rather than aborting.
pub fn run_grid(cfg: &ResolvedConfig, registry: &Registry, cache_dir: Option<&Path>) -> Result<GridOutcome> {
    let datasets: Vec<(String, std::result::Result<Prepared, String>)> = cfg
        .datasets
        .iter()
        .map(|name| {
            let prepared = registry
                .get(name)
                .map_err(BenchError::from)
                .and_then(|spec| prepare(spec, cache_dir))
                .map_err(|e| e.to_string());
            (name.clone(), prepared)
        })
        .collect();

    let mut cells = Vec::new();
    for (d, _) in datasets.iter().enumerate() {
        for (a, _) in cfg.algorithms.iter().enumerate() {
            for run in 0..cfg.runs {
                cells.push((d, a, run));
            }
        }
    }

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cfg.workers {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| BenchError::Internal(e.to_string()))?
    };
    let results: Vec<std::result::Result<(RunRecord, Vec<f64>), Failure>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(d, a, run)| {
                let (name, prepared) = &datasets[d];
                let (algorithm, options) = cfg.algorithms[a];
                let fail = |message: String| Failure {
                    dataset: name.clone(),
                    algorithm: algorithm.name().to_string(),
                    run,
                    message,
                };
                let ds = prepared.as_ref().map_err(|e| fail(e.clone()))?;
                let settings = RunSettings {
                    algorithm,
                    options,
                    population: cfg.population,
                    iterations: cfg.iterations.unwrap_or(ds.default_iterations),
                    seed: derive_seed(cfg.master_seed, &ds.name, algorithm.name(), run),
                    run,
                };
                execute(ds, &settings)
                    .map(|o| (o.record, o.trace))
                    .map_err(|e| fail(e.to_string()))
            })
            .collect()
    });

    let mut outcome = GridOutcome::default();
    for r in results {
        match r {
            Ok(ok) => outcome.runs.push(ok),
            Err(f) => outcome.failures.push(f),
        }
    }
    outcome.runs.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    outcome
        .failures
        .sort_by(|a, b| (&a.dataset, &a.algorithm, a.run).cmp(&(&b.dataset, &b.algorithm, b.run)));
    Ok(outcome)
}

/// Paths written by [`write_outcome`].
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub failures: Option<PathBuf>,
}

/// Writes results, summary, traces and (if any) failures under `dir`.
pub fn write_outcome(dir: &Path, outcome: &GridOutcome) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    for (record, trace) in &outcome.runs {
        write_trace(&dir.join(record.trace_path()), trace)?;
    }
    let results = dir.join("results.csv");
    save_records(&results, &outcome.records())?;
    let summary = dir.join("summary.csv");
    write_csv(&summary, &summarize(&outcome.records()))?;
    let failures = if outcome.failures.is_empty() {
        None
    } else {
        let path = dir.join("failures.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| BenchError::Internal(e.to_string()))?;
        for f in &outcome.failures {
            w.serialize(f).map_err(|e| BenchError::Internal(e.to_string()))?;
        }
        w.flush().map_err(|e| BenchError::io(&path, e))?;
        Some(path)
    };
    Ok(OutputFiles {
        results,
        summary,
        failures,
    })
}

pub fn summary_text(outcome: &GridOutcome) -> String {
    render_table(&summarize(&outcome.records()))
}
