//! Results file rows and trace files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// One seeded run. The column order here is the results file layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub best_sicd: f64,
    /// Empty for unlabeled data.
    pub error_rate_pct: Option<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub wall_time_ms: f64,
}

impl RunRecord {
    /// Trace file of this run, relative to the output directory.
    pub fn trace_path(&self) -> PathBuf {
        trace_path(&self.dataset, &self.algorithm, self.run)
    }

    pub fn sort_key(&self) -> (&str, &str, usize) {
        (&self.dataset, &self.algorithm, self.run)
    }
}

pub fn trace_path(dataset: &str, algorithm: &str, run: usize) -> PathBuf {
    Path::new("traces").join(format!("{dataset}_{algorithm}_{run:03}.csv"))
}

pub const COLUMNS: [&str; 9] = [
    "dataset",
    "algorithm",
    "run",
    "seed",
    "best_sicd",
    "error_rate_pct",
    "iterations",
    "evaluations",
    "wall_time_ms",
];

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS).map_err(|e| BenchError::Internal(e.to_string()))?;
    for r in records {
        w.serialize(r).map_err(|e| BenchError::Internal(e.to_string()))?;
    }
    w.flush().map_err(|e| BenchError::Internal(e.to_string()))?;
    Ok(())
}

pub fn save_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    write_records(f, records)
}

/// Appends one row, writing the header if the file is new or empty.
pub fn append_record(path: &Path, record: &RunRecord) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| BenchError::io(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(f);
    if fresh {
        w.write_record(COLUMNS).map_err(|e| BenchError::Internal(e.to_string()))?;
    }
    w.serialize(record).map_err(|e| BenchError::Internal(e.to_string()))?;
    w.flush().map_err(|e| BenchError::io(path, e))?;
    Ok(())
}

pub fn parse_records(text: &str, path: &Path) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    if headers.iter().ne(COLUMNS) {
        return Err(parse_err(path, 1, format!("expected header `{}`", COLUMNS.join(","))));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| parse_err(path, i + 2, e.to_string())))
        .collect()
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_records(&text, path)
}

fn parse_err(path: &Path, line: usize, message: String) -> BenchError {
    BenchError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

/// Two columns, `iteration` (1-based) and `best_sicd`.
pub fn render_trace(trace: &[f64]) -> String {
    let mut s = String::from("iteration,best_sicd\n");
    for (i, v) in trace.iter().enumerate() {
        s.push_str(&format!("{},{}\n", i + 1, v));
    }
    s
}

pub fn write_trace(path: &Path, trace: &[f64]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    fs::write(path, render_trace(trace)).map_err(|e| BenchError::io(path, e))
}

pub fn parse_trace(text: &str, path: &Path) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "iteration,best_sicd" => {}
        _ => return Err(parse_err(path, 1, "expected header `iteration,best_sicd`".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let (it, v) = line
            .split_once(',')
            .ok_or_else(|| parse_err(path, n, "expected two comma-separated columns".into()))?;
        let it: usize = it.trim().parse().map_err(|_| parse_err(path, n, format!("bad iteration `{it}`")))?;
        if it != out.len() + 1 {
            return Err(parse_err(path, n, format!("iteration {it} out of sequence")));
        }
        let v: f64 = v.trim().parse().map_err(|_| parse_err(path, n, format!("bad value `{v}`")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(parse_err(path, 1, "trace has no rows".into()));
    }
    Ok(out)
}

pub fn load_trace(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_trace(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(run: usize, sicd: f64, er: Option<f64>) -> RunRecord {
        RunRecord {
            dataset: "iris".into(),
            algorithm: "gnda".into(),
            run,
            seed: u64::MAX - run as u64,
            best_sicd: sicd,
            error_rate_pct: er,
            iterations: 300,
            evaluations: 18060,
            wall_time_ms: 12.5,
        }
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[record(0, 1.0, None)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "dataset,algorithm,run,seed,best_sicd,error_rate_pct,iterations,evaluations,wall_time_ms"
        );
        assert_eq!(parse_records(&text, Path::new("r.csv")).unwrap(), vec![record(0, 1.0, None)]);
    }

    proptest! {
        #[test]
        fn results_round_trip(rows in prop::collection::vec((0usize..100, -1e6f64..1e6, prop::option::of(0.0f64..100.0)), 0..20)) {
            let recs: Vec<RunRecord> = rows.into_iter().map(|(r, s, e)| record(r, s, e)).collect();
            let mut buf = Vec::new();
            write_records(&mut buf, &recs).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let back = parse_records(&text, Path::new("r")).unwrap();
            prop_assert_eq!(back, recs);
        }

        #[test]
        fn trace_round_trip(t in prop::collection::vec(-1e9f64..1e9, 1..50)) {
            prop_assert_eq!(parse_trace(&render_trace(&t), Path::new("t")).unwrap(), t);
        }
    }

    #[test]
    fn malformed_trace_names_line() {
        let err = parse_trace("iteration,best_sicd\n1,3.0\n2,abc\n", Path::new("t.csv")).unwrap_err();
        assert!(matches!(err, BenchError::Parse { line: 3, .. }), "{err}");
        let err = parse_trace("iteration,best_sicd\n1,3.0\n3,2.0\n", Path::new("t.csv")).unwrap_err();
        assert!(matches!(err, BenchError::Parse { line: 3, .. }));
        assert!(parse_trace("x,y\n", Path::new("t.csv")).is_err());
    }
}
