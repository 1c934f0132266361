//! Dataset registry, delimited-text loading, remote fetch with a
//! content-checked cache, and min-max scaling.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::scalar::Scalar;

const REGISTRY: &str = include_str!("../data/registry.toml");

const BUNDLED: &[(&str, &str)] = &[
    ("iris.csv", include_str!("../data/iris.csv")),
    ("wine.csv", include_str!("../data/wine.csv")),
    ("cancer.csv", include_str!("../data/cancer.csv")),
    ("cmc.csv", include_str!("../data/cmc.csv")),
];

/// Environment variable naming the download cache directory.
pub const CACHE_ENV: &str = "SWARMCLUSTER_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Comma,
    Whitespace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Uci,
    Shape,
}

impl Family {
    /// Default iteration budget for datasets of this family.
    pub fn default_iterations(self) -> usize {
        match self {
            Family::Uci => 900,
            Family::Shape => 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    Bundled(String),
    Path(PathBuf),
    Url(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedCounts {
    pub n_instances: usize,
    pub n_features: usize,
    pub n_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub name: String,
    pub family: Family,
    pub source: DataSource,
    pub delimiter: Delimiter,
    pub label_column: Option<usize>,
    pub header: bool,
    pub expected: Option<ExpectedCounts>,
}

impl DatasetSpec {
    /// A local file with no expected counts.
    pub fn local(name: impl Into<String>, path: impl Into<PathBuf>, delimiter: Delimiter, label_column: Option<usize>) -> Self {
        Self {
            name: name.into(),
            family: Family::Uci,
            source: DataSource::Path(path.into()),
            delimiter,
            label_column,
            header: false,
            expected: None,
        }
    }

    /// Number of clusters to search for: the expected class count, if known.
    pub fn k(&self) -> Option<usize> {
        self.expected.map(|e| e.n_classes)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    family: Family,
    file: Option<String>,
    url: Option<String>,
    path: Option<PathBuf>,
    delimiter: Delimiter,
    #[serde(default)]
    header: bool,
    label_column: Option<usize>,
    n_instances: Option<usize>,
    n_features: Option<usize>,
    n_classes: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct RawRegistry {
    dataset: Vec<RawEntry>,
}

/// Name-to-spec lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    specs: Vec<DatasetSpec>,
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_toml(REGISTRY).expect("bundled registry parses")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawRegistry = toml::from_str(text).map_err(|e| Error::Load {
            source_name: "registry".into(),
            message: e.to_string(),
        })?;
        let mut specs = Vec::with_capacity(raw.dataset.len());
        for e in raw.dataset {
            let source = match (e.file, e.url, e.path) {
                (Some(f), None, None) => DataSource::Bundled(f),
                (None, Some(u), None) => DataSource::Url(u),
                (None, None, Some(p)) => DataSource::Path(p),
                _ => {
                    return Err(Error::Load {
                        source_name: "registry".into(),
                        message: format!("dataset `{}` needs exactly one of file, url, path", e.name),
                    })
                }
            };
            let expected = match (e.n_instances, e.n_features, e.n_classes) {
                (Some(n_instances), Some(n_features), Some(n_classes)) => Some(ExpectedCounts {
                    n_instances,
                    n_features,
                    n_classes,
                }),
                (None, None, None) => None,
                _ => {
                    return Err(Error::Load {
                        source_name: "registry".into(),
                        message: format!("dataset `{}` gives only some expected counts", e.name),
                    })
                }
            };
            specs.push(DatasetSpec {
                name: e.name,
                family: e.family,
                source,
                delimiter: e.delimiter,
                label_column: e.label_column,
                header: e.header,
                expected,
            });
        }
        Ok(Self { specs })
    }

    pub fn specs(&self) -> &[DatasetSpec] {
        &self.specs
    }

    pub fn names(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&DatasetSpec> {
        let lower = name.to_ascii_lowercase();
        self.specs.iter().find(|s| s.name == lower).ok_or_else(|| Error::Lookup {
            kind: "dataset",
            name: name.to_string(),
            valid: self.names().join(", "),
        })
    }
}

/// Parses delimited text. Blank lines and lines starting with `#` are
/// skipped. Error messages use 1-based line and column numbers.
pub fn parse_delimited<T: Scalar>(
    name: &str,
    text: &str,
    delimiter: Delimiter,
    label_column: Option<usize>,
    header: bool,
) -> Result<Dataset<T>> {
    let load_err = |message: String| Error::Load {
        source_name: name.to_string(),
        message,
    };
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen_header = !header;
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            seen_header = true;
            continue;
        }
        let cells: Vec<&str> = match delimiter {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        };
        if *width.get_or_insert(cells.len()) != cells.len() {
            return Err(load_err(format!(
                "line {}: {} fields, expected {}",
                lineno + 1,
                cells.len(),
                width.unwrap_or(0)
            )));
        }
        if let Some(lc) = label_column {
            if lc >= cells.len() {
                return Err(load_err(format!("line {}: no label column {}", lineno + 1, lc + 1)));
            }
        }
        let mut row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            if Some(j) == label_column {
                labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| load_err(format!("line {}, column {}: `{cell}` is not a number", lineno + 1, j + 1)))?;
            row.push(T::lit(v));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(load_err("no data rows".into()));
    }
    let ds = Dataset::from_rows(name, &rows)?;
    if label_column.is_some() {
        ds.with_labels(&labels)
    } else {
        Ok(ds)
    }
}

fn check_expected<T: Scalar>(ds: &Dataset<T>, expected: &ExpectedCounts) -> Result<()> {
    let got = (ds.len(), ds.n_features(), ds.n_classes());
    let want = (expected.n_instances, expected.n_features, expected.n_classes);
    if got != want {
        return Err(Error::Load {
            source_name: ds.name().to_string(),
            message: format!(
                "expected {} instances, {} features, {} classes; found {}, {}, {}",
                want.0, want.1, want.2, got.0, got.1, got.2
            ),
        });
    }
    Ok(())
}

/// Loads the dataset described by `spec`. Remote sources must already be
/// in `cache_dir` (see [`fetch_remote`]).
pub fn load_dataset<T: Scalar>(spec: &DatasetSpec, cache_dir: Option<&Path>) -> Result<Dataset<T>> {
    let text = match &spec.source {
        DataSource::Bundled(file) => BUNDLED
            .iter()
            .find(|(f, _)| f == file)
            .map(|(_, body)| body.to_string())
            .ok_or_else(|| Error::Load {
                source_name: spec.name.clone(),
                message: format!("no bundled file `{file}`"),
            })?,
        DataSource::Path(p) => fs::read_to_string(p).map_err(|e| Error::Load {
            source_name: p.display().to_string(),
            message: e.to_string(),
        })?,
        DataSource::Url(url) => {
            let dir = cache_dir.map(Path::to_path_buf).unwrap_or_else(default_cache_dir);
            match cached_file(url, &dir)? {
                Some(p) => fs::read_to_string(p)?,
                None => {
                    return Err(Error::Fetch {
                        url: url.clone(),
                        message: format!(
                            "`{}` is not in the cache at {}; fetch it first",
                            spec.name,
                            dir.display()
                        ),
                    })
                }
            }
        }
    };
    let ds = parse_delimited(&spec.name, &text, spec.delimiter, spec.label_column, spec.header)?;
    if let Some(expected) = &spec.expected {
        check_expected(&ds, expected)?;
    }
    Ok(ds)
}

/// Loads a registered dataset by name.
pub fn load_named<T: Scalar>(name: &str, cache_dir: Option<&Path>) -> Result<Dataset<T>> {
    load_dataset(Registry::builtin().get(name)?, cache_dir)
}

/// `$SWARMCLUSTER_CACHE`, else `$HOME/.cache/swarmcluster`, else a
/// directory under the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => PathBuf::from(home).join(".cache").join("swarmcluster"),
        None => std::env::temp_dir().join("swarmcluster-cache"),
    }
}

/// Byte source for remote files.
pub trait Transport {
    fn get(&self, url: &str) -> Result<Vec<u8>>;
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Cache location of `url`: the file and its recorded checksum.
pub fn cache_paths(url: &str, cache_dir: &Path) -> (PathBuf, PathBuf) {
    let key = sha256_hex(url.as_bytes());
    (cache_dir.join(format!("{key}.data")), cache_dir.join(format!("{key}.sha256")))
}

/// Path of a verified cached copy of `url`, if present.
pub fn cached_file(url: &str, cache_dir: &Path) -> Result<Option<PathBuf>> {
    let (data, sum) = cache_paths(url, cache_dir);
    if !data.exists() || !sum.exists() {
        return Ok(None);
    }
    let expected = fs::read_to_string(&sum)?.trim().to_string();
    let actual = sha256_hex(&fs::read(&data)?);
    if expected != actual {
        return Err(Error::Integrity {
            path: data,
            expected,
            actual,
        });
    }
    Ok(Some(data))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Returns the cached copy of `url`, downloading it through `transport`
/// first when the cache is cold.
pub fn fetch_remote(url: &str, cache_dir: &Path, transport: &dyn Transport) -> Result<PathBuf> {
    if let Some(p) = cached_file(url, cache_dir)? {
        return Ok(p);
    }
    let bytes = transport.get(url)?;
    fs::create_dir_all(cache_dir)?;
    let (data, sum) = cache_paths(url, cache_dir);
    write_atomic(&data, &bytes)?;
    write_atomic(&sum, sha256_hex(&bytes).as_bytes())?;
    Ok(data)
}

/// Maps every feature affinely onto [0, 1]. Constant features become 0.
pub fn min_max_scale<T: Scalar>(dataset: &Dataset<T>) -> Dataset<T> {
    let d = dataset.n_features();
    let mut lo = vec![T::infinity(); d];
    let mut hi = vec![T::neg_infinity(); d];
    for p in dataset.points() {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    dataset.map_points(|j, v| {
        let span = hi[j] - lo[j];
        if span > T::zero() {
            (v - lo[j]) / span
        } else {
            T::zero()
        }
    })
}
