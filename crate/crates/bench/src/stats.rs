//! Friedman and post-hoc report built from a results file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use swarmcluster::stats::{posthoc_vs_control, FriedmanResult};
use swarmcluster::{friedman, friedman_from_average_ranks, ScoreTable};

use crate::error::{BenchError, Result};
use crate::records::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Sicd,
    Er,
}

impl FromStr for Metric {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sicd" => Ok(Self::Sicd),
            "er" => Ok(Self::Er),
            _ => Err(BenchError::usage(format!("unknown metric `{s}` (valid: sicd, er)"))),
        }
    }
}

impl Metric {
    fn value(self, r: &RunRecord) -> Option<f64> {
        match self {
            Self::Sicd => Some(r.best_sicd),
            Self::Er => r.error_rate_pct,
        }
    }
}

/// Per-cell means as a score table. Every (dataset, algorithm) pair seen
/// anywhere in the file must have at least one value.
pub fn score_table(records: &[RunRecord], metric: Metric) -> Result<ScoreTable> {
    let datasets: BTreeSet<&str> = records.iter().map(|r| r.dataset.as_str()).collect();
    let algorithms: BTreeSet<&str> = records.iter().map(|r| r.algorithm.as_str()).collect();
    let mut sums: BTreeMap<(&str, &str), (f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(v) = metric.value(r) {
            let e = sums.entry((&r.algorithm, &r.dataset)).or_default();
            e.0 += v;
            e.1 += 1;
        }
    }
    let mut missing = Vec::new();
    let mut scores = Vec::new();
    for &a in &algorithms {
        let mut row = Vec::new();
        for &d in &datasets {
            match sums.get(&(a, d)) {
                Some(&(s, n)) => row.push(s / n as f64),
                None => {
                    missing.push(format!("{d}/{a}"));
                    row.push(f64::NAN);
                }
            }
        }
        scores.push(row);
    }
    if !missing.is_empty() {
        return Err(BenchError::IncompleteGrid(missing.join(", ")));
    }
    Ok(ScoreTable::new(
        algorithms.iter().map(|s| s.to_string()).collect(),
        datasets.iter().map(|s| s.to_string()).collect(),
        scores,
    )?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub algorithm: String,
    pub average_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub algorithm: String,
    pub z: f64,
    pub p_value: f64,
    pub adjusted_p: Option<f64>,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub metric: Option<Metric>,
    pub datasets: usize,
    pub ranks: Vec<RankRow>,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub rejected: bool,
    pub control: Option<String>,
    pub holm: bool,
    pub comparisons: Vec<ComparisonRow>,
}

fn report(f: &FriedmanResult, metric: Option<Metric>, control: Option<&str>, holm: bool) -> Result<StatsReport> {
    let comparisons = match control {
        Some(c) => posthoc_vs_control(f, c, holm)?
            .into_iter()
            .map(|r| ComparisonRow {
                algorithm: r.algorithm,
                z: r.z,
                p_value: r.p_value,
                adjusted_p: r.adjusted_p,
                rejected: r.rejected,
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(StatsReport {
        metric,
        datasets: f.n,
        ranks: f
            .algorithms
            .iter()
            .zip(&f.average_ranks)
            .map(|(a, &r)| RankRow {
                algorithm: a.clone(),
                average_rank: r,
            })
            .collect(),
        statistic: f.statistic,
        degrees_of_freedom: f.k() - 1,
        p_value: f.p_value,
        alpha: f.alpha,
        rejected: f.rejected(),
        control: control.map(str::to_string),
        holm,
        comparisons,
    })
}

pub fn report_from_records(records: &[RunRecord], metric: Metric, control: Option<&str>, holm: bool) -> Result<StatsReport> {
    let table = score_table(records, metric)?;
    report(&friedman(&table)?, Some(metric), control, holm)
}

/// Report from a two-column `algorithm,average_rank` file over `n` datasets.
pub fn report_from_average_ranks(text: &str, path: &Path, n: usize, control: Option<&str>, holm: bool) -> Result<StatsReport> {
    let mut names = Vec::new();
    let mut ranks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.to_ascii_lowercase().starts_with("algorithm")) {
            continue;
        }
        let bad = |m: String| BenchError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: m,
        };
        let (a, r) = line.split_once(',').ok_or_else(|| bad("expected `algorithm,average_rank`".into()))?;
        ranks.push(r.trim().parse::<f64>().map_err(|_| bad(format!("bad rank `{}`", r.trim())))?);
        names.push(a.trim().to_string());
    }
    report(&friedman_from_average_ranks(names, ranks, n)?, None, control, holm)
}

pub fn render_report(r: &StatsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<14} {:>8}", "algorithm", "AR");
    for row in &r.ranks {
        let _ = writeln!(s, "{:<14} {:>8.4}", row.algorithm, row.average_rank);
    }
    let verdict = if r.rejected { "rejected" } else { "not rejected" };
    let _ = writeln!(
        s,
        "\nFriedman chi2 = {:.4} (df = {}, N = {}), p = {:.6e}, H0 {verdict} at alpha = {}",
        r.statistic, r.degrees_of_freedom, r.datasets, r.p_value, r.alpha
    );
    if let Some(c) = &r.control {
        let _ = writeln!(s, "\nversus control {c}{}:", if r.holm { " (Holm)" } else { "" });
        let _ = writeln!(s, "{:<14} {:>9} {:>12} {:>12} {:>13}", "algorithm", "z", "p", "adj. p", "H0");
        for row in &r.comparisons {
            let adj = row.adjusted_p.map(|p| format!("{p:.6}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<14} {:>9.4} {:>12.6} {:>12} {:>13}",
                row.algorithm,
                row.z,
                row.p_value,
                adj,
                if row.rejected { "rejected" } else { "not rejected" }
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rec(d: &str, a: &str, run: usize, v: f64) -> RunRecord {
        RunRecord {
            dataset: d.into(),
            algorithm: a.into(),
            run,
            seed: 0,
            best_sicd: v,
            error_rate_pct: Some(v / 10.0),
            iterations: 1,
            evaluations: 1,
            wall_time_ms: 0.0,
        }
    }

    #[test]
    fn dominant_algorithm_ranks_first() {
        let mut recs = Vec::new();
        for (i, d) in ["a", "b", "c"].iter().enumerate() {
            recs.push(rec(d, "best", 0, 1.0 + i as f64));
            recs.push(rec(d, "mid", 0, 10.0 + i as f64));
            recs.push(rec(d, "low", 0, 100.0));
        }
        let r = report_from_records(&recs, Metric::Sicd, Some("best"), false).unwrap();
        let best = r.ranks.iter().find(|x| x.algorithm == "best").unwrap();
        assert_eq!(best.average_rank, 1.0);
        assert!(render_report(&r).contains("Friedman chi2"));
    }

    #[test]
    fn identical_algorithms_give_zero() {
        let recs: Vec<RunRecord> = ["a", "b"]
            .iter()
            .flat_map(|d| [rec(d, "x", 0, 5.0), rec(d, "y", 0, 5.0)])
            .collect();
        let r = report_from_records(&recs, Metric::Er, None, false).unwrap();
        assert_abs_diff_eq!(r.statistic, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cell_means_feed_ranks() {
        // x averages 2 on dataset a, y averages 3
        let recs = vec![
            rec("a", "x", 0, 1.0),
            rec("a", "x", 1, 3.0),
            rec("a", "y", 0, 3.0),
            rec("b", "x", 0, 9.0),
            rec("b", "y", 0, 8.0),
        ];
        let t = score_table(&recs, Metric::Sicd).unwrap();
        assert_eq!(t.scores()[0], vec![2.0, 9.0]);
    }

    #[test]
    fn missing_cell_is_reported() {
        let recs = vec![rec("a", "x", 0, 1.0), rec("a", "y", 0, 2.0), rec("b", "x", 0, 1.0)];
        match score_table(&recs, Metric::Sicd) {
            Err(BenchError::IncompleteGrid(m)) => assert_eq!(m, "b/y"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn average_rank_file() {
        let text = "algorithm,average_rank\nK-Means,8.125\nGA,6.25\nPSO,4.25\nMVO,6.625\nGWO,4.375\nABC,6\nACO,5.625\nWOA,2.625\nChOAGNDA,1\n";
        let r = report_from_average_ranks(text, Path::new("ar.csv"), 8, Some("ChOAGNDA"), false).unwrap();
        assert_abs_diff_eq!(r.statistic, 39.15, epsilon = 0.01);
        assert_eq!(r.comparisons.len(), 8);
        let err = report_from_average_ranks("a,1\nb,x\n", Path::new("ar.csv"), 8, None, false).unwrap_err();
        assert!(matches!(err, BenchError::Parse { line: 2, .. }));
    }
}
