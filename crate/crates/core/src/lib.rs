//! Metaheuristic centroid clustering: chaotic chimp optimization (ChOA),
//! generalized normal distribution optimization (GNDA), opposition-based
//! learning and their hybrid ChOAGNDA, with a K-means baseline, Friedman
//! statistics and dataset loading.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the common double-precision instantiation.
//!
//! ```
//! use swarmcluster::{choagnda_run, load_named, sicd, Dataset64, RunConfig};
//!
//! let iris: Dataset64 = load_named("iris", None).unwrap();
//! let cfg = RunConfig { population_size: 10, max_iterations: 20, seed: 1, k_clusters: 3 };
//! let run = choagnda_run(&iris, &cfg).unwrap();
//! assert_eq!(run.best_objective, sicd(&iris, &run.centroids).unwrap());
//! ```

pub mod chaos;
pub mod choa;
pub mod cluster;
pub mod data;
pub mod error;
pub mod gnda;
pub mod hybrid;
pub mod kmeans;
pub mod model;
pub mod objective;
pub mod obl;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use chaos::{chaotic_sequence, ChaoticMapKind, ChaoticState};
pub use choa::{choa_optimize, coefficient_f, ChimpGroup, ChoaParams, ChoaState, ChoaVersion, Leaders};
pub use cluster::{choa_run, choagnda_run, gnda_run, run_algorithm, Algorithm, AlgorithmOptions, ClusteringRun};
pub use data::{load_dataset, load_named, min_max_scale, DatasetSpec, Registry};
pub use error::{Error, Result};
pub use gnda::{gnda_optimize, GndaState};
pub use hybrid::{choagnda_optimize, HybridParams, HybridState, PhaseRecord};
pub use kmeans::{kmeans_from, kmeans_run, KMeansResult};
pub use model::{
    bounds_from_dataset, clamp, random_candidate, Candidate, CentroidSet, Dataset, OptimizerResult, OptimizerTrace,
    Population, Problem, RunConfig, SearchBounds,
};
pub use objective::{assign_points, error_rate, sicd, sse, Assignment, ClusteringProblem, ObjectiveMode};
pub use obl::{opposed_init, opposite, selective_opposition};
pub use rng::{DrawSource, RandomSource, ScriptedDraws};
pub use scalar::Scalar;
pub use stats::{friedman, friedman_from_average_ranks, posthoc_vs_control, FriedmanResult, ScoreTable};

pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type CentroidSet64 = CentroidSet<f64>;
pub type CentroidSet32 = CentroidSet<f32>;
pub type SearchBounds64 = SearchBounds<f64>;
pub type SearchBounds32 = SearchBounds<f32>;
pub type ClusteringRun64 = ClusteringRun<f64>;
pub type ClusteringRun32 = ClusteringRun<f32>;
