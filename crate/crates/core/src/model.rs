//! Shared domain types: datasets, centroid encodings, search bounds, run
//! configuration and the population container the optimizers evolve.

use crate::error::{Error, Result};
use crate::rng::DrawSource;
use crate::scalar::Scalar;

/// N points by d features, optionally with ground-truth classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    name: String,
    n_features: usize,
    points: Vec<T>,
    labels: Option<Vec<usize>>,
    class_names: Vec<String>,
}

impl<T: Scalar> Dataset<T> {
    /// Builds a dataset from rows. Every row must have the same non-zero
    /// length and only finite values.
    pub fn from_rows(name: impl Into<String>, rows: &[Vec<T>]) -> Result<Self> {
        let name = name.into();
        let first = rows
            .first()
            .ok_or_else(|| Error::structural(format!("dataset `{name}` has no points")))?;
        let d = first.len();
        if d == 0 {
            return Err(Error::structural(format!("dataset `{name}` has zero features")));
        }
        let mut points = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::structural(format!(
                    "row {i} of `{name}` has {} values, expected {d}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::structural(format!("row {i} column {j} of `{name}` is not finite")));
            }
            points.extend_from_slice(row);
        }
        Ok(Self {
            name,
            n_features: d,
            points,
            labels: None,
            class_names: Vec::new(),
        })
    }

    /// Attaches class labels given as arbitrary identifiers. Classes are
    /// numbered in order of first appearance.
    pub fn with_labels<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::structural(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        let mut class_names: Vec<String> = Vec::new();
        let mut ids = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let id = match class_names.iter().position(|c| c == label) {
                Some(id) => id,
                None => {
                    class_names.push(label.to_string());
                    class_names.len() - 1
                }
            };
            ids.push(id);
        }
        self.labels = Some(ids);
        self.class_names = class_names;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.points[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[T]> {
        self.points.chunks_exact(self.n_features)
    }

    /// Class index per point, if the dataset is labeled.
    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Number of points per class, indexed like `class_names`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_classes()];
        if let Some(labels) = &self.labels {
            for &l in labels {
                sizes[l] += 1;
            }
        }
        sizes
    }

    pub(crate) fn map_points(&self, mut f: impl FnMut(usize, T) -> T) -> Self {
        let d = self.n_features;
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(idx, &v)| f(idx % d, v))
            .collect();
        Self {
            points,
            ..self.clone()
        }
    }
}

/// K centroids by d features, stored centroid-major (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet<T> {
    k: usize,
    d: usize,
    values: Vec<T>,
}

impl<T: Scalar> CentroidSet<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::structural("centroid rows have unequal lengths"));
        }
        Self::from_flat(rows.len(), d, rows.concat())
    }

    /// Unflattens a `k * d` vector whose centroid index varies slowest.
    pub fn from_flat(k: usize, d: usize, values: Vec<T>) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::structural("centroid set needs k >= 1 and d >= 1"));
        }
        if values.len() != k * d {
            return Err(Error::structural(format!(
                "flat centroid vector has {} values, expected {k}x{d}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::structural("centroid coordinates must be finite"));
        }
        Ok(Self { k, d, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_features(&self) -> usize {
        self.d
    }

    pub fn centroid(&self, j: usize) -> &[T] {
        &self.values[j * self.d..(j + 1) * self.d]
    }

    pub fn centroids(&self) -> impl ExactSizeIterator<Item = &[T]> {
        self.values.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[T] {
        &self.values
    }

    pub fn into_flat(self) -> Vec<T> {
        self.values
    }
}

/// Per-coordinate box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> SearchBounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::structural(format!(
                "bounds need equal non-zero lengths, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::structural(format!("invalid bound [{lo}, {hi}] at coordinate {j}")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lo, hi]` on every one of `dim` coordinates.
    pub fn uniform(dim: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Repeats the per-feature bounds once per centroid, matching the
    /// centroid-major flat encoding.
    pub fn tile(&self, k: usize) -> Self {
        Self {
            lower: self.lower.repeat(k),
            upper: self.upper.repeat(k),
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    /// Projects every coordinate of `x` into its interval.
    pub fn clamp_in_place(&self, x: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim());
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(lo).min(hi);
        }
    }

    /// `lower + (upper - lower) * u` per coordinate, one uniform draw each.
    pub fn sample<R: DrawSource + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * T::lit(rng.uniform()))
            .collect()
    }
}

/// Per-feature min/max box of a dataset.
pub fn bounds_from_dataset<T: Scalar>(dataset: &Dataset<T>) -> Result<SearchBounds<T>> {
    if dataset.is_empty() {
        return Err(Error::structural("cannot derive bounds from an empty dataset"));
    }
    let d = dataset.n_features();
    let mut lower = vec![T::infinity(); d];
    let mut upper = vec![T::neg_infinity(); d];
    for p in dataset.points() {
        for j in 0..d {
            lower[j] = lower[j].min(p[j]);
            upper[j] = upper[j].max(p[j]);
        }
    }
    SearchBounds::new(lower, upper)
}

/// K centroids drawn uniformly inside per-feature bounds.
pub fn random_candidate<T: Scalar, R: DrawSource + ?Sized>(
    bounds: &SearchBounds<T>,
    k: usize,
    rng: &mut R,
) -> Result<CentroidSet<T>> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let values = bounds.tile(k).sample(rng);
    CentroidSet::from_flat(k, bounds.dim(), values)
}

/// Projects a centroid set into per-feature bounds.
pub fn clamp<T: Scalar>(candidate: &CentroidSet<T>, bounds: &SearchBounds<T>) -> Result<CentroidSet<T>> {
    if candidate.n_features() != bounds.dim() {
        return Err(Error::structural(format!(
            "candidate has {} features, bounds have {}",
            candidate.n_features(),
            bounds.dim()
        )));
    }
    let mut values = candidate.as_flat().to_vec();
    bounds.tile(candidate.k()).clamp_in_place(&mut values);
    CentroidSet::from_flat(candidate.k(), candidate.n_features(), values)
}

/// Budget and seed of a single optimizer run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub k_clusters: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            population_size: 60,
            max_iterations: 900,
            seed: 0,
            k_clusters: 2,
        }
    }
}

impl RunConfig {
    /// Checks the constraints the hybrid relies on: an even population of
    /// at least four and a non-zero iteration budget.
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::config(format!(
                "population size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        self.validate_budget()
    }

    pub(crate) fn validate_budget(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations must be at least 1"));
        }
        if self.population_size == 0 {
            return Err(Error::config("population size must be at least 1"));
        }
        if self.k_clusters == 0 {
            return Err(Error::config("k_clusters must be at least 1"));
        }
        Ok(())
    }
}

/// A minimization problem over a box.
pub trait Problem<T: Scalar> {
    fn bounds(&self) -> &SearchBounds<T>;

    fn evaluate(&self, x: &[T]) -> T;

    fn dim(&self) -> usize {
        self.bounds().dim()
    }
}

/// Adapts a closure into a [`Problem`].
pub struct FnProblem<T, F> {
    bounds: SearchBounds<T>,
    f: F,
}

impl<T: Scalar, F: Fn(&[T]) -> T> FnProblem<T, F> {
    pub fn new(bounds: SearchBounds<T>, f: F) -> Self {
        Self { bounds, f }
    }
}

impl<T: Scalar, F: Fn(&[T]) -> T> Problem<T> for FnProblem<T, F> {
    fn bounds(&self) -> &SearchBounds<T> {
        &self.bounds
    }

    fn evaluate(&self, x: &[T]) -> T {
        (self.f)(x)
    }
}

/// A flat position with its cached objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub position: Vec<T>,
    pub fitness: T,
}

impl<T: Scalar> Candidate<T> {
    pub fn evaluated<P: Problem<T> + ?Sized>(position: Vec<T>, problem: &P) -> Self {
        let fitness = problem.evaluate(&position);
        Self { position, fitness }
    }
}

/// Ordered candidates with cached fitness.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population<T> {
    pub members: Vec<Candidate<T>>,
}

impl<T: Scalar> Population<T> {
    pub fn new(members: Vec<Candidate<T>>) -> Self {
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fitnesses(&self) -> Vec<T> {
        self.members.iter().map(|c| c.fitness).collect()
    }

    /// Index of the lowest fitness; the first one on ties.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, c) in self.members.iter().enumerate() {
            if best.is_none_or(|b| c.fitness < self.members[b].fitness) {
                best = Some(i);
            }
        }
        best
    }

    pub fn best(&self) -> Option<&Candidate<T>> {
        self.best_index().map(|i| &self.members[i])
    }

    /// Stable ascending sort by fitness. Returns the permutation applied:
    /// `order[new_index] = old_index`.
    pub fn sort_by_fitness(&mut self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by(|&a, &b| {
            self.members[a]
                .fitness
                .partial_cmp(&self.members[b].fitness)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut old: Vec<Option<Candidate<T>>> = self.members.drain(..).map(Some).collect();
        self.members = order.iter().map(|&i| old[i].take().expect("permutation")).collect();
        order
    }

    pub fn is_sorted(&self) -> bool {
        self.members.windows(2).all(|w| w[0].fitness <= w[1].fitness)
    }

    /// Coordinate-wise arithmetic mean of all positions.
    pub fn mean_position(&self) -> Vec<T> {
        let dim = self.members.first().map(|c| c.position.len()).unwrap_or(0);
        let mut mean = vec![T::zero(); dim];
        for c in &self.members {
            for (m, &v) in mean.iter_mut().zip(&c.position) {
                *m = *m + v;
            }
        }
        let n = T::lit(self.members.len() as f64);
        mean.iter_mut().for_each(|m| *m = *m / n);
        mean
    }
}

/// Best-so-far objective value after each iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptimizerTrace<T> {
    pub best_so_far: Vec<T>,
}

impl<T: Scalar> OptimizerTrace<T> {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            best_so_far: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, v: T) {
        self.best_so_far.push(v);
    }

    pub fn len(&self) -> usize {
        self.best_so_far.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best_so_far.is_empty()
    }

    pub fn last(&self) -> Option<T> {
        self.best_so_far.last().copied()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.best_so_far.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Outcome of one optimizer run on a generic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult<T> {
    pub best: Candidate<T>,
    pub trace: OptimizerTrace<T>,
    /// Objective evaluations consumed, including initialization.
    pub evaluations: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomSource, ScriptedDraws};

    fn ds(rows: &[&[f64]]) -> Dataset<f64> {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        Dataset::from_rows("t", &rows).unwrap()
    }

    #[test]
    fn bounds_are_feature_min_max() {
        let b = bounds_from_dataset(&ds(&[&[0.0, 0.0], &[2.0, 4.0]])).unwrap();
        assert_eq!(b.lower(), &[0.0, 0.0]);
        assert_eq!(b.upper(), &[2.0, 4.0]);

        let b = bounds_from_dataset(&ds(&[&[5.0, 5.0]])).unwrap();
        assert_eq!(b.lower(), b.upper());
    }

    #[test]
    fn empty_dataset_rejected() {
        assert!(matches!(
            Dataset::<f64>::from_rows("e", &[]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn ragged_or_nonfinite_rows_rejected() {
        assert!(Dataset::from_rows("r", &[vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(Dataset::from_rows("r", &[vec![1.0, f64::NAN]]).is_err());
    }

    #[test]
    fn labels_counted_in_first_appearance_order() {
        let d = ds(&[&[1.0], &[2.0], &[3.0]]).with_labels(&["b", "a", "b"]).unwrap();
        assert_eq!(d.labels().unwrap(), &[0, 1, 0]);
        assert_eq!(d.n_classes(), 2);
        assert_eq!(d.class_sizes(), vec![2, 1]);
        assert!(ds(&[&[1.0]]).with_labels(&["a", "b"]).is_err());
    }

    #[test]
    fn random_candidate_edges() {
        let unit = SearchBounds::uniform(2, 0.0, 1.0).unwrap();
        let c = random_candidate(&unit, 3, &mut ScriptedDraws::constant(0.0)).unwrap();
        assert!(c.as_flat().iter().all(|&v| v == 0.0));

        let c = random_candidate(&unit, 3, &mut ScriptedDraws::constant(0.5)).unwrap();
        assert!(c.as_flat().iter().all(|&v| v == 0.5));

        let point = SearchBounds::new(vec![1.5, -2.0], vec![1.5, -2.0]).unwrap();
        let c = random_candidate(&point, 2, &mut RandomSource::new(4)).unwrap();
        assert_eq!(c.as_flat(), &[1.5, -2.0, 1.5, -2.0]);
    }

    #[test]
    fn random_candidate_in_bounds_and_reproducible() {
        let b = SearchBounds::new(vec![-1.0, 10.0], vec![1.0, 20.0]).unwrap();
        let x = random_candidate(&b, 4, &mut RandomSource::new(11)).unwrap();
        let y = random_candidate(&b, 4, &mut RandomSource::new(11)).unwrap();
        assert_eq!(x, y);
        for c in x.centroids() {
            assert!(c[0] >= -1.0 && c[0] < 1.0);
            assert!(c[1] >= 10.0 && c[1] < 20.0);
        }
    }

    #[test]
    fn clamp_projects_and_checks_dims() {
        let b = SearchBounds::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let inside = CentroidSet::from_rows(&[vec![0.5, 1.0]]).unwrap();
        assert_eq!(clamp(&inside, &b).unwrap(), inside);

        let outside = CentroidSet::from_rows(&[vec![-1.0, 3.5]]).unwrap();
        assert_eq!(clamp(&outside, &b).unwrap().as_flat(), &[0.0, 2.0]);

        let wrong = CentroidSet::from_rows(&[vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(clamp(&wrong, &b), Err(Error::Structural(_))));
    }

    #[test]
    fn centroid_set_flat_layout() {
        let c = CentroidSet::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(c.as_flat(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(c.centroid(1), &[3.0, 4.0]);
        assert!(CentroidSet::<f64>::from_flat(2, 2, vec![1.0; 3]).is_err());
        assert!(CentroidSet::<f64>::from_flat(0, 2, vec![]).is_err());
    }

    #[test]
    fn run_config_validation() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.population_size = 5;
        assert!(cfg.validate().is_err());
        cfg.population_size = 2;
        assert!(cfg.validate().is_err());
        cfg.population_size = 4;
        cfg.max_iterations = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn population_sort_is_stable() {
        let mut pop = Population::new(
            [3.0, 1.0, 3.0, 0.5]
                .iter()
                .enumerate()
                .map(|(i, &f)| Candidate {
                    position: vec![i as f64],
                    fitness: f,
                })
                .collect(),
        );
        let order = pop.sort_by_fitness();
        assert_eq!(order, vec![3, 1, 0, 2]);
        assert!(pop.is_sorted());
        assert_eq!(pop.members[2].position, vec![0.0]);
        assert_eq!(pop.mean_position(), vec![1.5]);
    }
}
