//! Friedman rank test and post-hoc z-tests against a control algorithm.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Mean scores of `k` algorithms on `N` datasets; lower is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    algorithms: Vec<String>,
    datasets: Vec<String>,
    /// `scores[a][d]`
    scores: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn new(algorithms: Vec<String>, datasets: Vec<String>, scores: Vec<Vec<f64>>) -> Result<Self> {
        if algorithms.len() < 2 || datasets.len() < 2 {
            return Err(Error::config(format!(
                "Friedman test needs at least 2 algorithms and 2 datasets, got {} and {}",
                algorithms.len(),
                datasets.len()
            )));
        }
        if scores.len() != algorithms.len() || scores.iter().any(|r| r.len() != datasets.len()) {
            return Err(Error::structural("score matrix does not match algorithm and dataset lists"));
        }
        if scores.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::structural("score table has a non-finite cell"));
        }
        Ok(Self {
            algorithms,
            datasets,
            scores,
        })
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn scores(&self) -> &[Vec<f64>] {
        &self.scores
    }
}

/// Ascending ranks with mid-ranks for ties; rank 1 is the lowest value.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Rank matrix `ranks[a][d]`, ranking algorithms within each dataset.
pub fn rank_rows(table: &ScoreTable) -> Vec<Vec<f64>> {
    let k = table.algorithms.len();
    let n = table.datasets.len();
    let mut ranks = vec![vec![0.0; n]; k];
    for d in 0..n {
        let column: Vec<f64> = table.scores.iter().map(|row| row[d]).collect();
        for (a, r) in mid_ranks(&column).into_iter().enumerate() {
            ranks[a][d] = r;
        }
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanResult {
    pub algorithms: Vec<String>,
    pub average_ranks: Vec<f64>,
    /// Number of datasets.
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
}

impl FriedmanResult {
    pub fn k(&self) -> usize {
        self.average_ranks.len()
    }

    pub fn rejected(&self) -> bool {
        self.p_value < self.alpha
    }
}

pub const DEFAULT_ALPHA: f64 = 0.05;

pub fn friedman(table: &ScoreTable) -> Result<FriedmanResult> {
    let n = table.datasets.len();
    let average_ranks = rank_rows(table)
        .iter()
        .map(|row| row.iter().sum::<f64>() / n as f64)
        .collect();
    friedman_from_average_ranks(table.algorithms.clone(), average_ranks, n)
}

/// Friedman statistic from already averaged ranks over `n` datasets.
pub fn friedman_from_average_ranks(algorithms: Vec<String>, average_ranks: Vec<f64>, n: usize) -> Result<FriedmanResult> {
    let k = average_ranks.len();
    if k < 2 || n < 2 {
        return Err(Error::config(format!("Friedman test needs k >= 2 and N >= 2, got k = {k}, N = {n}")));
    }
    if algorithms.len() != k {
        return Err(Error::structural("one name per average rank expected"));
    }
    let (kf, nf) = (k as f64, n as f64);
    let sum_sq: f64 = average_ranks.iter().map(|r| r * r).sum();
    let statistic = 12.0 * nf / (kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0);
    Ok(FriedmanResult {
        algorithms,
        average_ranks,
        n,
        statistic,
        p_value: chi_square_sf(statistic, k - 1),
        alpha: DEFAULT_ALPHA,
    })
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    dist.sf(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosthocRow {
    pub algorithm: String,
    pub control: String,
    pub z: f64,
    pub p_value: f64,
    /// Holm-adjusted p-value, when requested.
    pub adjusted_p: Option<f64>,
    pub rejected: bool,
}

/// `sqrt(k (k + 1) / (6 N))`
pub fn posthoc_standard_error(k: usize, n: usize) -> f64 {
    let (k, n) = (k as f64, n as f64);
    (k * (k + 1.0) / (6.0 * n)).sqrt()
}

/// z-test of every other algorithm against `control`, two-sided. With
/// `holm` the rejection uses step-down adjusted p-values.
pub fn posthoc_vs_control(result: &FriedmanResult, control: &str, holm: bool) -> Result<Vec<PosthocRow>> {
    let c = result
        .algorithms
        .iter()
        .position(|a| a == control)
        .ok_or_else(|| Error::Lookup {
            kind: "control algorithm",
            name: control.to_string(),
            valid: result.algorithms.join(", "),
        })?;
    let se = posthoc_standard_error(result.k(), result.n);
    let normal = Normal::standard();
    let mut rows: Vec<PosthocRow> = result
        .algorithms
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != c)
        .map(|(j, name)| {
            let z = (result.average_ranks[j] - result.average_ranks[c]) / se;
            let p = (2.0 * normal.sf(z.abs())).min(1.0);
            PosthocRow {
                algorithm: name.clone(),
                control: control.to_string(),
                z,
                p_value: p,
                adjusted_p: None,
                rejected: p < result.alpha,
            }
        })
        .collect();

    if holm {
        let m = rows.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| rows[a].p_value.total_cmp(&rows[b].p_value));
        let mut running = 0.0f64;
        let mut still_rejecting = true;
        for (step, &i) in order.iter().enumerate() {
            let adj = ((m - step) as f64 * rows[i].p_value).min(1.0);
            running = running.max(adj);
            rows[i].adjusted_p = Some(running);
            still_rejecting &= running < result.alpha;
            rows[i].rejected = still_rejecting;
        }
    }
    Ok(rows)
}
