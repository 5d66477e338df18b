//! Brute-force k-nearest-neighbour queries over the rows of a [`Dataset`].
//!
//! The query point is excluded by index, so exact duplicates of it are
//! ordinary neighbours at distance zero. Distance ties go to the smaller
//! point index.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::validate_knn_k;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::squared_euclidean;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Neighbor {
    pub index: usize,
    pub distance_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborSet {
    pub query: usize,
    /// Sorted by (distance, index).
    pub neighbors: Vec<Neighbor>,
}

fn by_distance_then_index(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance_sq
        .total_cmp(&b.distance_sq)
        .then(a.index.cmp(&b.index))
}

pub fn knn(data: &Dataset, query_index: usize, k: usize) -> Result<NeighborSet> {
    validate_knn_k(k, data.len())?;
    Ok(knn_unchecked(data, query_index, k))
}

fn knn_unchecked(data: &Dataset, query: usize, k: usize) -> NeighborSet {
    let q = data.row(query);
    let mut all: Vec<Neighbor> = data
        .rows()
        .enumerate()
        .filter(|&(i, _)| i != query)
        .map(|(index, r)| Neighbor {
            index,
            distance_sq: squared_euclidean(q, r),
        })
        .collect();
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_index);
    NeighborSet {
        query,
        neighbors: all,
    }
}

/// Neighbour sets for several queries, computed in parallel; output order
/// follows `queries`.
pub fn knn_batch(data: &Dataset, queries: &[usize], k: usize) -> Result<Vec<NeighborSet>> {
    validate_knn_k(k, data.len())?;
    Ok(queries
        .par_iter()
        .map(|&q| knn_unchecked(data, q, k))
        .collect())
}
