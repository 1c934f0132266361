use swarmcluster::{run_algorithm, sicd, Algorithm, AlgorithmOptions, Dataset32, RunConfig, load_named};

#[test]
fn every_algorithm_runs_in_f32() {
    let iris: Dataset32 = load_named("iris", None).unwrap();
    let cfg = RunConfig {
        population_size: 20,
        max_iterations: 60,
        seed: 3,
        k_clusters: 3,
    };
    for a in Algorithm::ALL {
        let r = run_algorithm(&iris, a, &cfg, &AlgorithmOptions::default()).unwrap();
        assert!(r.trace.is_non_increasing(), "{a}");
        let direct = sicd(&iris, &r.centroids).unwrap();
        assert!((r.best_objective - direct).abs() <= 1e-3 * direct, "{a}: {} vs {direct}", r.best_objective);
        assert!(r.best_objective < 200.0, "{a}: {}", r.best_objective);
    }
}
