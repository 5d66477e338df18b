//! Candidate orderings for the two boundary-point detectors.

use rayon::prelude::*;
use serde::Serialize;

use crate::assignment::Assignment;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::metrics::gini_from_counts;
use crate::neighbors::{knn_batch, NeighborSet};
use crate::squared_euclidean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreOrder {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub point: usize,
    /// Cluster the point belongs to when the round starts.
    pub source: usize,
    pub score: f64,
}

/// Points of one cluster pair in processing order: by score in the given
/// direction, then by point index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateRanking {
    order: ScoreOrder,
    entries: Vec<Candidate>,
}

impl CandidateRanking {
    pub fn new(mut entries: Vec<Candidate>, order: ScoreOrder) -> Self {
        entries.sort_unstable_by(|x, y| {
            let by_score = x.score.total_cmp(&y.score);
            let by_score = match order {
                ScoreOrder::Ascending => by_score,
                ScoreOrder::Descending => by_score.reverse(),
            };
            by_score.then(x.point.cmp(&y.point))
        });
        Self { order, entries }
    }

    pub fn order(&self) -> ScoreOrder {
        self.order
    }

    pub fn entries(&self) -> &[Candidate] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn cluster_mean(data: &Dataset, assignment: &Assignment, cluster: usize) -> Vec<f64> {
    let mut sum = vec![0.0; data.dim()];
    for (r, &c) in data.rows().zip(assignment.cluster_of()) {
        if c == cluster {
            for (s, x) in sum.iter_mut().zip(r) {
                *s += x;
            }
        }
    }
    let size = assignment.sizes()[cluster] as f64;
    sum.iter_mut().for_each(|s| *s /= size);
    sum
}

fn pair_members(assignment: &Assignment, a: usize, b: usize) -> Vec<usize> {
    assignment
        .cluster_of()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == a || c == b)
        .map(|(i, _)| i)
        .collect()
}

/// Scores every point of A ∪ B by its distance to the other cluster's
/// centroid; smallest distance first.
pub fn near_foreign_ranking(
    data: &Dataset,
    assignment: &Assignment,
    a: usize,
    b: usize,
) -> CandidateRanking {
    let centroid_a = cluster_mean(data, assignment, a);
    let centroid_b = cluster_mean(data, assignment, b);
    let entries = pair_members(assignment, a, b)
        .into_par_iter()
        .map(|point| {
            let source = assignment.cluster(point);
            let foreign = if source == a { &centroid_b } else { &centroid_a };
            Candidate {
                point,
                source,
                score: squared_euclidean(data.row(point), foreign).sqrt(),
            }
        })
        .collect();
    CandidateRanking::new(entries, ScoreOrder::Ascending)
}

/// Gini impurity of the cluster labels among a point's neighbours.
pub fn neighborhood_gini(assignment: &Assignment, set: &NeighborSet) -> f64 {
    let mut counts = vec![0usize; assignment.k()];
    for nb in &set.neighbors {
        counts[assignment.cluster(nb.index)] += 1;
    }
    gini_from_counts(&counts)
}

/// Ranks A ∪ B by neighbourhood impurity, most mixed first. Neighbours are
/// searched over the whole dataset.
pub fn gini_ranking(
    data: &Dataset,
    assignment: &Assignment,
    a: usize,
    b: usize,
    knn_k: usize,
) -> Result<CandidateRanking> {
    let members = pair_members(assignment, a, b);
    let sets = knn_batch(data, &members, knn_k)?;
    Ok(gini_ranking_from_neighbors(assignment, &sets))
}

/// Same as [`gini_ranking`] with the neighbour sets already computed.
pub fn gini_ranking_from_neighbors(
    assignment: &Assignment,
    sets: &[NeighborSet],
) -> CandidateRanking {
    let entries = sets
        .iter()
        .map(|set| Candidate {
            point: set.query,
            source: assignment.cluster(set.query),
            score: neighborhood_gini(assignment, set),
        })
        .collect();
    CandidateRanking::new(entries, ScoreOrder::Descending)
}
