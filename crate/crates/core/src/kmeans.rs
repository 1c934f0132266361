//! Lloyd's K-means with Forgy seeding, used as the classical baseline.

use crate::error::{Error, Result};
use crate::model::{CentroidSet, Dataset};
use crate::objective::{assign_points, euclidean_distance, sicd, sse, Assignment};
use crate::rng::{DrawSource, RandomSource};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult<T> {
    pub centroids: CentroidSet<T>,
    pub assignment: Assignment,
    pub sse: T,
    pub sicd: T,
    pub iterations_used: usize,
    /// SSE of the seeds followed by SSE after every update.
    pub sse_history: Vec<T>,
}

/// `k` distinct data points chosen uniformly at random.
pub fn forgy_seeds<T: Scalar, R: DrawSource + ?Sized>(dataset: &Dataset<T>, k: usize, rng: &mut R) -> Result<CentroidSet<T>> {
    if k == 0 || k > dataset.len() {
        return Err(Error::config(format!("k = {k} needs 1 <= k <= {}", dataset.len())));
    }
    // partial Fisher-Yates over indices
    let mut idx: Vec<usize> = (0..dataset.len()).collect();
    for i in 0..k {
        let j = i + rng.index(idx.len() - i);
        idx.swap(i, j);
    }
    let rows: Vec<Vec<T>> = idx[..k].iter().map(|&i| dataset.point(i).to_vec()).collect();
    CentroidSet::from_rows(&rows)
}

pub fn kmeans_run<T: Scalar>(dataset: &Dataset<T>, k: usize, seed: u64, max_iters: usize) -> Result<KMeansResult<T>> {
    let mut rng = RandomSource::new(seed);
    let seeds = forgy_seeds(dataset, k, &mut rng)?;
    kmeans_from(dataset, seeds, max_iters)
}

/// Lloyd iterations from the given centroids until the assignment stops
/// changing or `max_iters` updates were made.
pub fn kmeans_from<T: Scalar>(dataset: &Dataset<T>, initial: CentroidSet<T>, max_iters: usize) -> Result<KMeansResult<T>> {
    let k = initial.k();
    let d = dataset.n_features();
    if k > dataset.len() {
        return Err(Error::config(format!("k = {k} exceeds {} points", dataset.len())));
    }
    if initial.n_features() != d {
        return Err(Error::structural("initial centroids do not match dataset features"));
    }
    let mut centroids = initial;
    let mut assignment = assign_points(dataset, &centroids)?;
    let mut sse_history = vec![sse(dataset, &centroids)?];
    let mut iterations_used = 0;

    while iterations_used < max_iters {
        centroids = update(dataset, &centroids, &assignment)?;
        iterations_used += 1;
        let next = assign_points(dataset, &centroids)?;
        sse_history.push(sse(dataset, &centroids)?);
        let stable = next == assignment;
        assignment = next;
        if stable {
            break;
        }
    }

    Ok(KMeansResult {
        sse: sse(dataset, &centroids)?,
        sicd: sicd(dataset, &centroids)?,
        centroids,
        assignment,
        iterations_used,
        sse_history,
    })
}

/// Mean of each cluster. An empty cluster takes the point farthest from
/// its current centroid.
fn update<T: Scalar>(dataset: &Dataset<T>, centroids: &CentroidSet<T>, assignment: &Assignment) -> Result<CentroidSet<T>> {
    let k = centroids.k();
    let d = dataset.n_features();
    let mut sums = vec![T::zero(); k * d];
    let mut counts = vec![0usize; k];
    for (p, &c) in dataset.points().zip(&assignment.labels) {
        counts[c] += 1;
        for j in 0..d {
            sums[c * d + j] = sums[c * d + j] + p[j];
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            let own = centroids.centroid(c);
            let mut far = 0;
            let mut far_d = T::neg_infinity();
            for (i, p) in dataset.points().enumerate() {
                let dist = euclidean_distance(p, own)?;
                if dist > far_d {
                    far_d = dist;
                    far = i;
                }
            }
            sums[c * d..(c + 1) * d].copy_from_slice(dataset.point(far));
        } else {
            let n = T::lit(counts[c] as f64);
            sums[c * d..(c + 1) * d].iter_mut().for_each(|v| *v = *v / n);
        }
    }
    CentroidSet::from_flat(k, d, sums)
}
