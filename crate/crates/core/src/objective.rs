//! Clustering objective: Euclidean distance, nearest-centroid assignment,
//! the sum of intra-cluster distances (SICD) and the error rate under the
//! best cluster-to-class matching.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};
use crate::model::{bounds_from_dataset, CentroidSet, Dataset, Problem, SearchBounds};
use crate::scalar::Scalar;

/// Largest matching side solved by enumeration; larger ones use Kuhn–Munkres.
pub const BRUTE_FORCE_MAX_SIDE: usize = 8;

/// What each point contributes to the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectiveMode {
    /// Euclidean distance to the nearest centroid (SICD).
    #[default]
    Distance,
    /// Squared Euclidean distance (SSE).
    Squared,
}

impl std::str::FromStr for ObjectiveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance" => Ok(Self::Distance),
            "squared" => Ok(Self::Squared),
            other => Err(Error::Lookup {
                kind: "objective",
                name: other.to_string(),
                valid: "distance, squared".into(),
            }),
        }
    }
}

impl std::fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Distance => "distance",
            Self::Squared => "squared",
        })
    }
}

fn squared<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let diff = x - y;
        acc + diff * diff
    })
}

pub fn euclidean_distance<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::structural(format!(
            "distance between vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(squared(a, b).sqrt())
}

/// Nearest centroid (lowest index on ties) and its squared distance.
/// `centroids` is the flat centroid-major encoding.
fn nearest<T: Scalar>(point: &[T], centroids: &[T]) -> (usize, T) {
    let d = point.len();
    let mut best = (0, T::infinity());
    for (j, c) in centroids.chunks_exact(d).enumerate() {
        let dist = squared(point, c);
        if dist < best.1 {
            best = (j, dist);
        }
    }
    best
}

fn check_dims<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>) -> Result<()> {
    if dataset.n_features() != centroids.n_features() {
        return Err(Error::structural(format!(
            "dataset has {} features, centroids have {}",
            dataset.n_features(),
            centroids.n_features()
        )));
    }
    Ok(())
}

/// Cluster index per point. `labels[i] == j` is the 0/1 association weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub labels: Vec<usize>,
    pub k: usize,
}

impl Assignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::structural(format!("cluster index {bad} out of range for k = {k}")));
        }
        Ok(Self { labels, k })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

pub fn assign_points<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>) -> Result<Assignment> {
    check_dims(dataset, centroids)?;
    let labels = dataset
        .points()
        .map(|p| nearest(p, centroids.as_flat()).0)
        .collect();
    Ok(Assignment {
        labels,
        k: centroids.k(),
    })
}

fn objective_flat<T: Scalar>(dataset: &Dataset<T>, centroids: &[T], mode: ObjectiveMode) -> T {
    dataset.points().fold(T::zero(), |acc, p| {
        let (_, sq) = nearest(p, centroids);
        acc + match mode {
            ObjectiveMode::Distance => sq.sqrt(),
            ObjectiveMode::Squared => sq,
        }
    })
}

/// Sum over points of the distance to their nearest centroid.
pub fn sicd<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>) -> Result<T> {
    objective(dataset, centroids, ObjectiveMode::Distance)
}

/// Sum over points of the squared distance to their nearest centroid.
pub fn sse<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>) -> Result<T> {
    objective(dataset, centroids, ObjectiveMode::Squared)
}

pub fn objective<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>, mode: ObjectiveMode) -> Result<T> {
    check_dims(dataset, centroids)?;
    Ok(objective_flat(dataset, centroids.as_flat(), mode))
}

/// Centroid placement for a dataset as a box-constrained minimization over
/// flat `k * d` vectors.
#[derive(Debug, Clone)]
pub struct ClusteringProblem<'a, T> {
    dataset: &'a Dataset<T>,
    k: usize,
    mode: ObjectiveMode,
    feature_bounds: SearchBounds<T>,
    bounds: SearchBounds<T>,
}

impl<'a, T: Scalar> ClusteringProblem<'a, T> {
    /// Bounds default to the per-feature data range.
    pub fn new(dataset: &'a Dataset<T>, k: usize, mode: ObjectiveMode) -> Result<Self> {
        let feature_bounds = bounds_from_dataset(dataset)?;
        Self::with_bounds(dataset, k, mode, feature_bounds)
    }

    pub fn with_bounds(
        dataset: &'a Dataset<T>,
        k: usize,
        mode: ObjectiveMode,
        feature_bounds: SearchBounds<T>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        if feature_bounds.dim() != dataset.n_features() {
            return Err(Error::structural("bounds do not match dataset features"));
        }
        let bounds = feature_bounds.tile(k);
        Ok(Self {
            dataset,
            k,
            mode,
            feature_bounds,
            bounds,
        })
    }

    pub fn dataset(&self) -> &'a Dataset<T> {
        self.dataset
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> ObjectiveMode {
        self.mode
    }

    pub fn feature_bounds(&self) -> &SearchBounds<T> {
        &self.feature_bounds
    }

    /// Reshapes a flat position into centroids.
    pub fn centroids(&self, flat: &[T]) -> Result<CentroidSet<T>> {
        CentroidSet::from_flat(self.k, self.dataset.n_features(), flat.to_vec())
    }
}

impl<T: Scalar> Problem<T> for ClusteringProblem<'_, T> {
    fn bounds(&self) -> &SearchBounds<T> {
        &self.bounds
    }

    fn evaluate(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.bounds.dim());
        objective_flat(self.dataset, x, self.mode)
    }
}

/// Optimal injective pairing between clusters and classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterClassMapping {
    /// Class assigned to each cluster; `None` for clusters left unmatched
    /// when there are more clusters than classes.
    pub map: Vec<Option<usize>>,
    pub misclassified: usize,
}

/// `counts[cluster][class]`.
fn contingency(assignment: &Assignment, labels: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
    let mut counts = vec![vec![0usize; n_classes]; assignment.k];
    for (&c, &l) in assignment.labels.iter().zip(labels) {
        counts[c][l] += 1;
    }
    counts
}

/// Transposes if needed so rows are the smaller side. Returns the matrix and
/// whether rows are classes.
fn oriented(counts: &[Vec<usize>], n_classes: usize) -> (Vec<Vec<usize>>, bool) {
    let k = counts.len();
    if k <= n_classes {
        (counts.to_vec(), false)
    } else {
        let t = (0..n_classes).map(|l| (0..k).map(|c| counts[c][l]).collect()).collect();
        (t, true)
    }
}

fn mapping_from_rows(row_to_col: &[usize], rows_are_classes: bool, k: usize) -> Vec<Option<usize>> {
    let mut map = vec![None; k];
    for (r, &c) in row_to_col.iter().enumerate() {
        if rows_are_classes {
            map[c] = Some(r);
        } else {
            map[r] = Some(c);
        }
    }
    map
}

/// Exhaustive search over injective maps from the smaller side to the larger.
pub fn matching_bruteforce(assignment: &Assignment, labels: &[usize], n_classes: usize) -> ClusterClassMapping {
    let counts = contingency(assignment, labels, n_classes);
    let (m, rows_are_classes) = oriented(&counts, n_classes);
    let n_cols = m.first().map(Vec::len).unwrap_or(0);

    fn search(
        m: &[Vec<usize>],
        row: usize,
        used: &mut [bool],
        current: &mut Vec<usize>,
        score: usize,
        best: &mut (usize, Vec<usize>),
    ) {
        if row == m.len() {
            if score > best.0 || best.1.is_empty() {
                *best = (score, current.clone());
            }
            return;
        }
        for col in 0..used.len() {
            if !used[col] {
                used[col] = true;
                current.push(col);
                search(m, row + 1, used, current, score + m[row][col], best);
                current.pop();
                used[col] = false;
            }
        }
    }

    let mut best = (0, Vec::new());
    search(&m, 0, &mut vec![false; n_cols], &mut Vec::new(), 0, &mut best);
    ClusterClassMapping {
        map: mapping_from_rows(&best.1, rows_are_classes, assignment.k),
        misclassified: labels.len() - best.0,
    }
}

/// Kuhn–Munkres maximum-weight matching on the contingency table.
pub fn matching_hungarian(assignment: &Assignment, labels: &[usize], n_classes: usize) -> ClusterClassMapping {
    let counts = contingency(assignment, labels, n_classes);
    let (m, rows_are_classes) = oriented(&counts, n_classes);
    let weights = Matrix::from_rows(m.iter().map(|r| r.iter().map(|&v| v as i64)))
        .expect("rectangular contingency table");
    let (matched, row_to_col) = kuhn_munkres(&weights);
    ClusterClassMapping {
        map: mapping_from_rows(&row_to_col, rows_are_classes, assignment.k),
        misclassified: labels.len() - matched as usize,
    }
}

pub fn best_mapping<T: Scalar>(dataset: &Dataset<T>, assignment: &Assignment) -> Result<ClusterClassMapping> {
    let labels = dataset.labels().ok_or(Error::UnlabeledDataset)?;
    if labels.len() != assignment.len() {
        return Err(Error::structural(format!(
            "assignment covers {} points, dataset has {}",
            assignment.len(),
            labels.len()
        )));
    }
    let n_classes = dataset.n_classes();
    Ok(if assignment.k.max(n_classes) <= BRUTE_FORCE_MAX_SIDE {
        matching_bruteforce(assignment, labels, n_classes)
    } else {
        matching_hungarian(assignment, labels, n_classes)
    })
}

/// Percentage of points misclassified under the best injective
/// cluster-to-class matching.
pub fn error_rate<T: Scalar>(dataset: &Dataset<T>, assignment: &Assignment) -> Result<f64> {
    let mapping = best_mapping(dataset, assignment)?;
    Ok(100.0 * mapping.misclassified as f64 / assignment.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn one_d(xs: &[f64]) -> Dataset<f64> {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        Dataset::from_rows("1d", &rows).unwrap()
    }

    fn cents(xs: &[f64]) -> CentroidSet<f64> {
        CentroidSet::from_rows(&xs.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_relative_eq!(
            euclidean_distance(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]).unwrap(),
            1.732_050_807_568_877_2,
            epsilon = 1e-12
        );
        assert!(matches!(euclidean_distance(&[1.0], &[1.0, 2.0]), Err(Error::Structural(_))));
    }

    #[test]
    fn assignment_examples() {
        let a = assign_points(&one_d(&[0.0, 10.0]), &cents(&[0.0, 10.0])).unwrap();
        assert_eq!(a.labels, vec![0, 1]);
        let a = assign_points(&one_d(&[5.0]), &cents(&[0.0, 10.0])).unwrap();
        assert_eq!(a.labels, vec![0], "ties go to the lowest index");
        let a = assign_points(&one_d(&[0.0, 1.0, 9.0, 10.0]), &cents(&[0.5, 9.5])).unwrap();
        assert_eq!(a.labels, vec![0, 0, 1, 1]);
    }

    #[test]
    fn sicd_examples() {
        let d = Dataset::from_rows("p", &[vec![1.0, 2.0]]).unwrap();
        let c = CentroidSet::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert_eq!(sicd(&d, &c).unwrap(), 0.0);

        let d = Dataset::from_rows("p", &[vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let c = CentroidSet::from_rows(&[vec![1.0, 0.0]]).unwrap();
        assert_eq!(sicd(&d, &c).unwrap(), 2.0);
        assert_eq!(sse(&d, &c).unwrap(), 2.0);

        let bad = CentroidSet::from_rows(&[vec![1.0]]).unwrap();
        assert!(sicd(&d, &bad).is_err());
    }

    #[test]
    fn problem_matches_sicd() {
        let d = one_d(&[0.0, 1.0, 9.0, 10.0]);
        let p = ClusteringProblem::new(&d, 2, ObjectiveMode::Distance).unwrap();
        assert_eq!(p.evaluate(&[0.5, 9.5]), 2.0);
        assert_eq!(p.bounds().lower(), &[0.0, 0.0]);
        let q = ClusteringProblem::new(&d, 2, ObjectiveMode::Squared).unwrap();
        assert_eq!(q.evaluate(&[0.5, 9.5]), 1.0);
    }

    fn labeled(labels: &[&str]) -> Dataset<f64> {
        one_d(&vec![0.0; labels.len()]).with_labels(labels).unwrap()
    }

    #[test]
    fn error_rate_examples() {
        let d = labeled(&["A", "A", "B", "B"]);
        let perfect = Assignment::new(vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(error_rate(&d, &perfect).unwrap(), 0.0);
        let swapped = Assignment::new(vec![1, 1, 0, 0], 2).unwrap();
        assert_eq!(error_rate(&d, &swapped).unwrap(), 0.0);
        let off = Assignment::new(vec![0, 0, 0, 1], 2).unwrap();
        assert_eq!(error_rate(&d, &off).unwrap(), 25.0);
    }

    #[test]
    fn error_rate_needs_labels() {
        let d = one_d(&[0.0, 1.0]);
        let a = Assignment::new(vec![0, 0], 1).unwrap();
        assert!(matches!(error_rate(&d, &a), Err(Error::UnlabeledDataset)));
    }

    #[test]
    fn more_clusters_than_classes() {
        let d = labeled(&["A", "A", "B", "B"]);
        let a = Assignment::new(vec![0, 1, 2, 2], 3).unwrap();
        let m = best_mapping(&d, &a).unwrap();
        assert_eq!(m.misclassified, 1);
        assert_eq!(m.map.iter().filter(|c| c.is_some()).count(), 2);
        assert_eq!(matching_hungarian(&a, d.labels().unwrap(), 2), m);
    }

    #[test]
    fn fewer_clusters_than_classes() {
        let d = labeled(&["A", "B", "C", "C"]);
        let a = Assignment::new(vec![0, 0, 0, 0], 1).unwrap();
        assert_eq!(error_rate(&d, &a).unwrap(), 50.0);
    }

    #[test]
    fn assignment_rejects_out_of_range() {
        assert!(Assignment::new(vec![0, 2], 2).is_err());
    }
}
