//! Lloyd's K-means.
//!
//! Seeding is deterministic for a given seed (ChaCha8 stream). Assignment
//! ties go to the lowest cluster index. A cluster that empties during an
//! iteration is reseeded with the point lying farthest from its current
//! centroid, taken from a cluster that can spare it.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::assignment::Assignment;
use crate::config::{InitMethod, RunConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics::ss_decomposition;
use crate::rng::seeded_rng;
use crate::squared_euclidean;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Centroids {
    k: usize,
    d: usize,
    values: Vec<f64>,
}

impl Centroids {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("centroid rows must be non-empty and equal length"));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("centroid values must be finite"));
        }
        Ok(Self {
            k: rows.len(),
            d,
            values: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.d..(j + 1) * self.d]
    }

    fn set_row(&mut self, j: usize, row: &[f64]) {
        self.values[j * self.d..(j + 1) * self.d].copy_from_slice(row);
    }

    /// Index and squared distance of the closest centroid; ties to the lowest index.
    pub fn nearest(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0, squared_euclidean(x, self.row(0)));
        for j in 1..self.k {
            let dist = squared_euclidean(x, self.row(j));
            if dist < best.1 {
                best = (j, dist);
            }
        }
        best
    }
}

/// Seeds K centroids from K distinct data points.
pub fn init_centroids(data: &Dataset, k: usize, seed: u64) -> Result<Centroids> {
    init_centroids_with(data, k, seed, InitMethod::RandomPoints)
}

pub fn init_centroids_with(
    data: &Dataset,
    k: usize,
    seed: u64,
    method: InitMethod,
) -> Result<Centroids> {
    if k < 2 || k > data.len() {
        return Err(Error::invalid(format!(
            "cluster count K = {k} must satisfy 2 <= K <= n = {}",
            data.len()
        )));
    }
    let chosen = match method {
        InitMethod::RandomPoints => random_distinct_points(data, k, seed)?,
        InitMethod::KMeansPlusPlus => plus_plus_points(data, k, seed)?,
    };
    let rows: Vec<Vec<f64>> = chosen.iter().map(|&i| data.row(i).to_vec()).collect();
    Centroids::from_rows(&rows)
}

fn too_few_distinct(k: usize) -> Error {
    Error::invalid(format!("fewer than K = {k} distinct points"))
}

fn random_distinct_points(data: &Dataset, k: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = seeded_rng(seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for i in order {
        if chosen.iter().all(|&c| data.row(c) != data.row(i)) {
            chosen.push(i);
            if chosen.len() == k {
                return Ok(chosen);
            }
        }
    }
    Err(too_few_distinct(k))
}

fn plus_plus_points(data: &Dataset, k: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = seeded_rng(seed);
    let n = data.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = data
        .rows()
        .map(|r| squared_euclidean(r, data.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            return Err(too_few_distinct(k));
        }
        let mut target = rng.random::<f64>() * total;
        // Fall back to the last positive-weight point if rounding walks off the end.
        let mut pick = d2.iter().rposition(|&w| w > 0.0).unwrap();
        for (i, &w) in d2.iter().enumerate() {
            if w > 0.0 && target < w {
                pick = i;
                break;
            }
            target -= w;
        }
        chosen.push(pick);
        for (i, r) in data.rows().enumerate() {
            d2[i] = d2[i].min(squared_euclidean(r, data.row(pick)));
        }
    }
    Ok(chosen)
}

/// Result of one nearest-centroid pass. Clusters that received no point are
/// listed in `empty_clusters`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestCentroid {
    pub labels: Vec<usize>,
    pub empty_clusters: Vec<usize>,
}

pub fn assign_points(data: &Dataset, centroids: &Centroids) -> NearestCentroid {
    let labels: Vec<usize> = (0..data.len())
        .into_par_iter()
        .map(|i| centroids.nearest(data.row(i)).0)
        .collect();
    let mut seen = vec![false; centroids.k()];
    for &l in &labels {
        seen[l] = true;
    }
    let empty_clusters = (0..centroids.k()).filter(|&j| !seen[j]).collect();
    NearestCentroid {
        labels,
        empty_clusters,
    }
}

/// Recomputes each centroid as the mean of its members.
pub fn update_centroids(data: &Dataset, labels: &[usize], k: usize) -> Result<Centroids> {
    let d = data.dim();
    let mut sums = vec![0.0; k * d];
    let mut sizes = vec![0usize; k];
    for (row, &c) in data.rows().zip(labels) {
        if c >= k {
            return Err(Error::Contract(format!("label {c} outside [0, {k})")));
        }
        sizes[c] += 1;
        for (s, x) in sums[c * d..(c + 1) * d].iter_mut().zip(row) {
            *s += x;
        }
    }
    if let Some(j) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::Contract(format!("cluster {j} is empty")));
    }
    for (j, &size) in sizes.iter().enumerate() {
        for s in &mut sums[j * d..(j + 1) * d] {
            *s /= size as f64;
        }
    }
    Ok(Centroids { k, d, values: sums })
}

#[derive(Debug, Clone)]
pub struct KMeansOutcome {
    pub assignment: Assignment,
    pub centroids: Centroids,
    /// Number of assignment passes performed.
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squares of the final assignment.
    pub objective: f64,
    /// Within-cluster sum of squares after each (assign, update) pair.
    pub history: Vec<f64>,
}

fn within_ss(data: &Dataset, labels: &[usize], centroids: &Centroids) -> f64 {
    data.rows()
        .zip(labels)
        .map(|(r, &c)| squared_euclidean(r, centroids.row(c)))
        .sum()
}

/// Moves the farthest-from-centroid point of a splittable cluster into each
/// empty cluster and makes that point the cluster's centroid.
fn repair_empty(
    data: &Dataset,
    labels: &mut [usize],
    centroids: &mut Centroids,
    empty: &[usize],
) {
    let mut sizes = vec![0usize; centroids.k()];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for &j in empty {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in data.rows().enumerate() {
            if sizes[labels[i]] < 2 {
                continue;
            }
            let dist = squared_euclidean(row, centroids.row(labels[i]));
            if best.is_none_or(|(_, b)| dist > b) {
                best = Some((i, dist));
            }
        }
        // K <= n guarantees some cluster holds two points while another is empty.
        let (i, _) = best.expect("a cluster with at least two points exists");
        sizes[labels[i]] -= 1;
        sizes[j] += 1;
        labels[i] = j;
        centroids.set_row(j, data.row(i));
    }
}

pub fn run_kmeans(data: &Dataset, config: &RunConfig) -> Result<KMeansOutcome> {
    let k = config.k;
    let mut centroids = init_centroids_with(data, k, config.seed, config.init)?;
    let mut labels: Option<Vec<usize>> = None;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_kmeans_iters {
        iterations += 1;
        let NearestCentroid {
            labels: mut next,
            empty_clusters,
        } = assign_points(data, &centroids);
        if !empty_clusters.is_empty() {
            repair_empty(data, &mut next, &mut centroids, &empty_clusters);
        }
        if labels.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        centroids = update_centroids(data, &next, k)?;
        history.push(within_ss(data, &next, &centroids));
        labels = Some(next);
    }

    let labels = match labels {
        Some(l) => l,
        // Only reachable with max_kmeans_iters == 0.
        None => {
            let mut first = assign_points(data, &centroids);
            let empty = std::mem::take(&mut first.empty_clusters);
            repair_empty(data, &mut first.labels, &mut centroids, &empty);
            centroids = update_centroids(data, &first.labels, k)?;
            first.labels
        }
    };
    let assignment = Assignment::new(labels, k)?;
    let objective = ss_decomposition(data, &assignment).within;
    Ok(KMeansOutcome {
        assignment,
        centroids,
        iterations,
        converged,
        objective,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;

    fn random_data(n: usize, d: usize, seed: u64) -> Dataset {
        let mut rng = seeded_rng(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let labels = (0..n).map(|i| i % 2).collect();
        Dataset::from_rows(&rows, labels).unwrap()
    }

    #[test]
    fn same_seed_same_centroids() {
        let data = random_data(40, 3, 1);
        assert_eq!(
            init_centroids(&data, 4, 9).unwrap(),
            init_centroids(&data, 4, 9).unwrap()
        );
        assert_ne!(
            init_centroids(&data, 4, 9).unwrap(),
            init_centroids(&data, 4, 10).unwrap()
        );
    }

    #[test]
    fn k_equals_n_gives_permutation() {
        let data = random_data(12, 2, 3);
        let c = init_centroids(&data, 12, 5).unwrap();
        let mut picked: Vec<Vec<f64>> = (0..12).map(|j| c.row(j).to_vec()).collect();
        let mut rows: Vec<Vec<f64>> = data.rows().map(<[f64]>::to_vec).collect();
        picked.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(picked, rows);
    }

    #[test]
    fn duplicates_are_skipped_and_too_few_distinct_errors() {
        let rows = vec![vec![1.0], vec![1.0], vec![1.0], vec![2.0]];
        let data = Dataset::from_rows(&rows, vec![0, 1, 0, 1]).unwrap();
        let c = init_centroids(&data, 2, 0).unwrap();
        assert_ne!(c.row(0), c.row(1));
        assert!(init_centroids(&data, 3, 0).is_err());
        assert!(init_centroids_with(&data, 3, 0, InitMethod::KMeansPlusPlus).is_err());
    }

    #[test]
    fn plus_plus_picks_distinct_points() {
        let data = random_data(50, 2, 8);
        let c = init_centroids_with(&data, 5, 2, InitMethod::KMeansPlusPlus).unwrap();
        for a in 0..5 {
            for b in a + 1..5 {
                assert_ne!(c.row(a), c.row(b));
            }
        }
    }

    #[test]
    fn tie_goes_to_lowest_index() {
        let data = Dataset::from_rows(&[vec![0.0, 0.0], vec![9.0, 9.0]], vec![0, 1]).unwrap();
        let c = Centroids::from_rows(&[vec![-1.0, 0.0], vec![50.0, 50.0], vec![1.0, 0.0]])
            .unwrap();
        let out = assign_points(&data, &c);
        assert_eq!(out.labels[0], 0);
    }

    #[test]
    fn dominance_and_empty_flag() {
        let data = Dataset::from_rows(&[vec![1.0, 1.0], vec![2.0, 1.0]], vec![0, 1]).unwrap();
        let c = Centroids::from_rows(&[vec![0.0, 0.0], vec![10.0, 10.0]]).unwrap();
        let out = assign_points(&data, &c);
        assert_eq!(out.labels, vec![0, 0]);
        assert_eq!(out.empty_clusters, vec![1]);
    }

    #[test]
    fn assignment_matches_exhaustive_comparison() {
        let data = random_data(50, 3, 11);
        let c = init_centroids(&data, 5, 4).unwrap();
        let out = assign_points(&data, &c);
        for (i, row) in data.rows().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for j in 0..5 {
                let dist: f64 = row.iter().zip(c.row(j)).map(|(a, b)| (a - b).powi(2)).sum();
                if dist < best_d {
                    best_d = dist;
                    best = j;
                }
            }
            assert_eq!(out.labels[i], best, "point {i}");
        }
    }

    #[test]
    fn update_small_cases() {
        let data = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![2.0, 2.0], vec![7.0, -3.0]],
            vec![0, 1, 0],
        )
        .unwrap();
        let c = update_centroids(&data, &[0, 0, 1], 2).unwrap();
        assert_eq!(c.row(0), &[1.0, 1.0]);
        assert_eq!(c.row(1), &[7.0, -3.0]);
        assert!(matches!(
            update_centroids(&data, &[0, 0, 0], 2),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn update_matches_column_means_on_200_points() {
        let data = random_data(200, 4, 21);
        let labels: Vec<usize> = (0..200).map(|i| (i * 7 + i / 13) % 3).collect();
        let c = update_centroids(&data, &labels, 3).unwrap();
        for j in 0..3 {
            for col in 0..4 {
                let vals: Vec<f64> = data
                    .rows()
                    .zip(&labels)
                    .filter(|(_, &l)| l == j)
                    .map(|(r, _)| r[col])
                    .collect();
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                assert!((c.row(j)[col] - mean).abs() <= 1e-12 * mean.abs().max(1.0));
            }
        }
    }

    #[test]
    fn k_equals_n_has_zero_objective() {
        let data = random_data(9, 2, 5);
        let out = run_kmeans(&data, &RunConfig::new(9)).unwrap();
        assert_eq!(out.objective, 0.0);
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        // Two far groups with initial centroids both on the left: one
        // cluster empties on the first pass and must be refilled.
        let rows = vec![vec![0.0], vec![0.1], vec![0.2], vec![10.0], vec![10.1]];
        let data = Dataset::from_rows(&rows, vec![0, 1, 0, 1, 0]).unwrap();
        let mut labels = vec![0, 0, 0, 0, 0];
        let mut c = Centroids::from_rows(&[vec![0.0], vec![-5.0]]).unwrap();
        // farthest from centroid 0 is point 4 at 10.1
        repair_empty(&data, &mut labels, &mut c, &[1]);
        assert_eq!(labels, vec![0, 0, 0, 0, 1]);
        assert_eq!(c.row(1), &[10.1]);
    }

    #[test]
    fn zero_iteration_cap_still_yields_valid_assignment() {
        let data = random_data(30, 2, 2);
        let out = run_kmeans(&data, &RunConfig::new(3).with_max_kmeans_iters(0)).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.assignment.k(), 3);
    }
}
