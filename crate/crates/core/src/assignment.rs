//! Cluster membership and the per-cluster statistics derived from it.

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Point-to-cluster map with every cluster non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    cluster_of: Vec<usize>,
    k: usize,
    #[serde(skip)]
    sizes: Vec<usize>,
}

impl Assignment {
    pub fn new(cluster_of: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0usize; k];
        for (i, &c) in cluster_of.iter().enumerate() {
            if c >= k {
                return Err(Error::invalid(format!(
                    "point {i} assigned to cluster {c}, outside [0, {k})"
                )));
            }
            sizes[c] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::invalid(format!("cluster {empty} is empty")));
        }
        Ok(Self {
            cluster_of,
            k,
            sizes,
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cluster_of.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cluster_of.is_empty()
    }

    #[inline]
    pub fn cluster(&self, point: usize) -> usize {
        self.cluster_of[point]
    }

    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.cluster_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }

    /// Moves `point` into cluster `to`. Refuses to empty the source cluster.
    pub fn reassign(&mut self, point: usize, to: usize) -> Result<()> {
        if to >= self.k {
            return Err(Error::invalid(format!("cluster {to} outside [0, {})", self.k)));
        }
        let from = self.cluster_of[point];
        if from == to {
            return Ok(());
        }
        if self.sizes[from] == 1 {
            return Err(Error::Contract(format!(
                "moving point {point} would empty cluster {from}"
            )));
        }
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.cluster_of[point] = to;
        Ok(())
    }

    /// Group counts per cluster, `[cluster][group]`.
    pub fn group_counts(&self, data: &Dataset) -> Vec<Vec<usize>> {
        let mut counts = vec![vec![0usize; data.group_count()]; self.k];
        for (i, &c) in self.cluster_of.iter().enumerate() {
            counts[c][data.group_of(i)] += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterStats {
    pub size: usize,
    pub centroid: Vec<f64>,
    pub group_counts: Vec<usize>,
}

/// Size, mean and sensitive-group counts of every cluster.
///
/// Sums run sequentially in point order.
pub fn cluster_stats(data: &Dataset, assignment: &Assignment) -> Vec<ClusterStats> {
    let d = data.dim();
    let mut sums = vec![vec![0.0; d]; assignment.k()];
    for (row, &c) in data.rows().zip(assignment.cluster_of()) {
        for (s, x) in sums[c].iter_mut().zip(row) {
            *s += x;
        }
    }
    let counts = assignment.group_counts(data);
    sums.into_iter()
        .zip(counts)
        .zip(assignment.sizes())
        .map(|((sum, group_counts), &size)| ClusterStats {
            size,
            centroid: sum.into_iter().map(|s| s / size as f64).collect(),
            group_counts,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert!(Assignment::new(vec![0, 0, 2], 3).is_err());
        assert!(Assignment::new(vec![0, 3], 3).is_err());
        let a = Assignment::new(vec![0, 1, 1], 2).unwrap();
        assert_eq!(a.sizes(), &[1, 2]);
        assert_eq!(a.members(1), vec![1, 2]);
    }

    #[test]
    fn reassign_keeps_clusters_non_empty() {
        let mut a = Assignment::new(vec![0, 1, 1], 2).unwrap();
        assert!(a.reassign(0, 1).is_err());
        a.reassign(1, 0).unwrap();
        assert_eq!(a.cluster_of(), &[0, 0, 1]);
        assert_eq!(a.sizes(), &[2, 1]);
    }

    #[test]
    fn stats_sizes_match_group_counts() {
        let data = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![2.0, 2.0], vec![5.0, 1.0]],
            vec![0, 1, 1],
        )
        .unwrap();
        let a = Assignment::new(vec![0, 0, 1], 2).unwrap();
        let stats = cluster_stats(&data, &a);
        assert_eq!(stats[0].centroid, vec![1.0, 1.0]);
        assert_eq!(stats[1].centroid, vec![5.0, 1.0]);
        for s in &stats {
            assert_eq!(s.size, s.group_counts.iter().sum::<usize>());
        }
    }
}
