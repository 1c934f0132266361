//! Dataset-level entry points: run any algorithm on a dataset and get
//! centroids, convergence trace and the final assignment back.

use std::fmt;
use std::str::FromStr;

use crate::chaos::ChaoticMapKind;
use crate::choa::{choa_optimize, ChoaParams, ChoaVersion};
use crate::error::{Error, Result};
use crate::gnda::gnda_optimize;
use crate::hybrid::{choagnda_optimize, HybridParams, PhaseRecord};
use crate::kmeans::kmeans_run;
use crate::model::{CentroidSet, Dataset, OptimizerTrace, RunConfig};
use crate::objective::{assign_points, objective, Assignment, ClusteringProblem, ObjectiveMode};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Choa1,
    Choa2,
    Gnda,
    ChoaGnda,
    KMeans,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Self::Choa1, Self::Choa2, Self::Gnda, Self::ChoaGnda, Self::KMeans];

    pub fn name(self) -> &'static str {
        match self {
            Self::Choa1 => "choa1",
            Self::Choa2 => "choa2",
            Self::Gnda => "gnda",
            Self::ChoaGnda => "choagnda",
            Self::KMeans => "kmeans",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL.into_iter().find(|a| a.name() == lower).ok_or_else(|| Error::Lookup {
            kind: "algorithm",
            name: s.to_string(),
            valid: Self::ALL.map(|a| a.name()).join(", "),
        })
    }
}

/// Knobs shared by every algorithm; each one reads what applies to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgorithmOptions {
    pub chaos: ChaoticMapKind,
    pub strict_alg1: bool,
    pub gnda: bool,
    pub obl: bool,
    pub mode: ObjectiveMode,
    /// Lloyd iteration cap for K-means.
    pub kmeans_max_iters: usize,
}

impl Default for AlgorithmOptions {
    fn default() -> Self {
        Self {
            chaos: ChaoticMapKind::GaussMouse,
            strict_alg1: false,
            gnda: true,
            obl: true,
            mode: ObjectiveMode::Distance,
            kmeans_max_iters: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringRun<T> {
    pub centroids: CentroidSet<T>,
    pub best_objective: T,
    pub trace: OptimizerTrace<T>,
    pub assignment: Assignment,
    pub evaluations: usize,
    /// Outer iterations actually run (Lloyd steps for K-means).
    pub iterations: usize,
    /// Hybrid phase log; empty for the other algorithms.
    pub phases: Vec<PhaseRecord<T>>,
}

pub fn choa_run<T: Scalar>(
    dataset: &Dataset<T>,
    config: &RunConfig,
    version: ChoaVersion,
    chaos: ChaoticMapKind,
) -> Result<ClusteringRun<T>> {
    let opts = AlgorithmOptions {
        chaos,
        ..Default::default()
    };
    let algo = match version {
        ChoaVersion::I => Algorithm::Choa1,
        ChoaVersion::II => Algorithm::Choa2,
    };
    run_algorithm(dataset, algo, config, &opts)
}

pub fn gnda_run<T: Scalar>(dataset: &Dataset<T>, config: &RunConfig) -> Result<ClusteringRun<T>> {
    run_algorithm(dataset, Algorithm::Gnda, config, &AlgorithmOptions::default())
}

pub fn choagnda_run<T: Scalar>(dataset: &Dataset<T>, config: &RunConfig) -> Result<ClusteringRun<T>> {
    run_algorithm(dataset, Algorithm::ChoaGnda, config, &AlgorithmOptions::default())
}

pub fn run_algorithm<T: Scalar>(
    dataset: &Dataset<T>,
    algorithm: Algorithm,
    config: &RunConfig,
    opts: &AlgorithmOptions,
) -> Result<ClusteringRun<T>> {
    let k = config.k_clusters;
    if algorithm == Algorithm::KMeans {
        let r = kmeans_run(dataset, k, config.seed, opts.kmeans_max_iters)?;
        let best = objective(dataset, &r.centroids, opts.mode)?;
        let mut trace = OptimizerTrace::with_capacity(1);
        trace.push(best);
        return Ok(ClusteringRun {
            best_objective: best,
            trace,
            assignment: r.assignment,
            evaluations: r.iterations_used + 1,
            iterations: r.iterations_used,
            centroids: r.centroids,
            phases: Vec::new(),
        });
    }

    let problem = ClusteringProblem::new(dataset, k, opts.mode)?;
    let choa = |version| ChoaParams {
        version,
        chaos: opts.chaos,
        strict_alg1: opts.strict_alg1,
    };
    let (result, phases) = match algorithm {
        Algorithm::Choa1 => (choa_optimize(&problem, config, &choa(ChoaVersion::I))?, Vec::new()),
        Algorithm::Choa2 => (choa_optimize(&problem, config, &choa(ChoaVersion::II))?, Vec::new()),
        Algorithm::Gnda => (gnda_optimize(&problem, config)?, Vec::new()),
        Algorithm::ChoaGnda => {
            let params = HybridParams {
                gnda: opts.gnda,
                obl: opts.obl,
                strict_alg1: opts.strict_alg1,
            };
            let h = choagnda_optimize(&problem, config, params)?;
            (h.result, h.phases)
        }
        Algorithm::KMeans => unreachable!(),
    };
    let centroids = problem.centroids(&result.best.position)?;
    let assignment = assign_points(dataset, &centroids)?;
    Ok(ClusteringRun {
        centroids,
        best_objective: result.best.fitness,
        iterations: result.trace.len(),
        trace: result.trace,
        assignment,
        evaluations: result.evaluations,
        phases,
    })
}
