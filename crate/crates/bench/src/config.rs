//! Experiment grid configuration, read from a TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmcluster::{Algorithm, AlgorithmOptions, ChaoticMapKind, ObjectiveMode, Registry};

use crate::error::{BenchError, Result};

fn default_runs() -> usize {
    50
}

fn default_population() -> usize {
    60
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_chaos() -> String {
    ChaoticMapKind::GaussMouse.name().to_string()
}

fn default_objective() -> String {
    ObjectiveMode::Distance.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<String>,
    pub algorithms: Vec<String>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_population")]
    pub population: usize,
    /// Fixed budget for every dataset; `None` uses the family default.
    #[serde(default)]
    pub iterations: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Chaotic map for ChOA entries without an override.
    #[serde(default = "default_chaos")]
    pub chaos: String,
    #[serde(default)]
    pub chaos_by_algorithm: BTreeMap<String, String>,
    #[serde(default = "default_objective")]
    pub objective: String,
    #[serde(default)]
    pub strict_alg1: bool,
    /// Worker threads; `None` uses every available core.
    #[serde(default)]
    pub workers: Option<usize>,
}

/// A config with names resolved and checked.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub datasets: Vec<String>,
    pub algorithms: Vec<(Algorithm, AlgorithmOptions)>,
    pub runs: usize,
    pub population: usize,
    pub iterations: Option<usize>,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BenchError::usage(format!("invalid experiment config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn resolve(&self, registry: &Registry) -> Result<ResolvedConfig> {
        if self.datasets.is_empty() {
            return Err(BenchError::usage("experiment config lists no datasets"));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::usage("experiment config lists no algorithms"));
        }
        if self.runs == 0 {
            return Err(BenchError::usage("runs must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(BenchError::usage("workers must be at least 1"));
        }
        let datasets = self
            .datasets
            .iter()
            .map(|d| Ok(registry.get(d)?.name.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mode: ObjectiveMode = self.objective.parse()?;
        let default_chaos: ChaoticMapKind = self.chaos.parse()?;
        let mut algorithms = Vec::with_capacity(self.algorithms.len());
        for name in &self.algorithms {
            let algo: Algorithm = name.parse()?;
            let chaos = match self.chaos_by_algorithm.get(algo.name()) {
                Some(c) => c.parse()?,
                None => default_chaos,
            };
            let opts = AlgorithmOptions {
                chaos,
                strict_alg1: self.strict_alg1,
                mode,
                ..Default::default()
            };
            algorithms.push((algo, opts));
        }
        for key in self.chaos_by_algorithm.keys() {
            let algo: Algorithm = key.parse()?;
            if !algorithms.iter().any(|(a, _)| *a == algo) {
                return Err(BenchError::usage(format!("chaos override for `{key}`, which is not in the grid")));
            }
        }
        Ok(ResolvedConfig {
            datasets,
            algorithms,
            runs: self.runs,
            population: self.population,
            iterations: self.iterations,
            master_seed: self.master_seed,
            output_dir: self.output_dir.clone(),
            workers: self.workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
        datasets = ["iris", "Wine"]
        algorithms = ["choa1", "choagnda"]
        runs = 3
        master_seed = 9
        chaos = "tent"
        [chaos_by_algorithm]
        choa1 = "sine"
    "#;

    #[test]
    fn defaults_and_overrides() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.population, 60);
        assert_eq!(c.iterations, None);
        let r = c.resolve(&Registry::builtin()).unwrap();
        assert_eq!(r.datasets, vec!["iris", "wine"]);
        assert_eq!(r.algorithms[0].1.chaos, ChaoticMapKind::Sine);
        assert_eq!(r.algorithms[1].1.chaos, ChaoticMapKind::Tent);
    }

    #[test]
    fn bad_names_are_usage_errors() {
        let reg = Registry::builtin();
        for text in [
            r#"datasets = ["iris"]
               algorithms = []"#,
            r#"datasets = ["iris"]
               algorithms = ["foo"]"#,
            r#"datasets = ["nope"]
               algorithms = ["gnda"]"#,
            r#"datasets = ["iris"]
               algorithms = ["gnda"]
               runs = 0"#,
        ] {
            let err = ExperimentConfig::from_toml(text).unwrap().resolve(&reg).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{err}");
        }
        assert!(ExperimentConfig::from_toml("datasets = 3").is_err());
    }
}
