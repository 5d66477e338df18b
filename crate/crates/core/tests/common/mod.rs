#![allow(dead_code)]

use fairkm_core::rng::seeded_rng;
use fairkm_core::{Assignment, Dataset};
use rand::Rng;

/// Random points in [-5, 5]^d with random labels; every group and every
/// cluster is non-empty.
pub fn random_instance(seed: u64, n: usize, d: usize, groups: usize, k: usize) -> (Dataset, Assignment) {
    let mut rng = seeded_rng(seed);
    let features: Vec<f64> = (0..n * d).map(|_| rng.random_range(-5.0..5.0)).collect();
    let mut sensitive: Vec<usize> = (0..n).map(|_| rng.random_range(0..groups)).collect();
    let mut clusters: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    sensitive[..groups].iter_mut().enumerate().for_each(|(g, s)| *s = g);
    clusters[groups..groups + k].iter_mut().enumerate().for_each(|(c, s)| *s = c);
    (
        Dataset::new(features, d, sensitive, groups).unwrap(),
        Assignment::new(clusters, k).unwrap(),
    )
}

/// Points on a coarse integer grid, so distance ties are common.
pub fn grid_instance(seed: u64, n: usize, d: usize) -> Dataset {
    let mut rng = seeded_rng(seed);
    let features: Vec<f64> = (0..n * d).map(|_| rng.random_range(0..4) as f64).collect();
    let sensitive = (0..n).map(|i| i % 2).collect();
    Dataset::new(features, d, sensitive, 2).unwrap()
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
