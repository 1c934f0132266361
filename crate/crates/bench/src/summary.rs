//! Best / mean / worst / sample standard deviation per grid cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::records::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub dataset: String,
    pub algorithm: String,
    pub runs: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
    /// Mean error rate over the runs that have one.
    pub mean_error_rate_pct: Option<f64>,
}

pub fn describe(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (best, mean, worst, std)
}

/// One summary per (dataset, algorithm), sorted by that pair.
pub fn summarize(records: &[RunRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((&r.dataset, &r.algorithm)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((dataset, algorithm), rows)| {
            let sicd: Vec<f64> = rows.iter().map(|r| r.best_sicd).collect();
            let (best, mean, worst, std) = describe(&sicd);
            let ers: Vec<f64> = rows.iter().filter_map(|r| r.error_rate_pct).collect();
            CellSummary {
                dataset: dataset.to_string(),
                algorithm: algorithm.to_string(),
                runs: rows.len(),
                best,
                mean,
                worst,
                std,
                mean_error_rate_pct: (!ers.is_empty()).then(|| ers.iter().sum::<f64>() / ers.len() as f64),
            }
        })
        .collect()
}

pub fn render_table(summaries: &[CellSummary]) -> String {
    let mut s = format!(
        "{:<12} {:<10} {:>5} {:>14} {:>14} {:>14} {:>12} {:>8}\n",
        "dataset", "algorithm", "runs", "best", "mean", "worst", "std", "ER%"
    );
    for c in summaries {
        let er = c.mean_error_rate_pct.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<12} {:<10} {:>5} {:>14.4} {:>14.4} {:>14.4} {:>12.4} {:>8}",
            c.dataset, c.algorithm, c.runs, c.best, c.mean, c.worst, c.std, er
        );
    }
    s
}

pub fn write_csv(path: &std::path::Path, summaries: &[CellSummary]) -> crate::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| crate::BenchError::Internal(e.to_string()))?;
    for c in summaries {
        w.serialize(c).map_err(|e| crate::BenchError::Internal(e.to_string()))?;
    }
    w.flush().map_err(|e| crate::BenchError::io(path, e))
}
