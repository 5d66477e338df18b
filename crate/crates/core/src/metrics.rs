//! Scalar measures of a partition: the fairness index, cluster balance,
//! Gini impurity, the sum-of-squares decomposition and the quality ratio κ.
//!
//! All sums are sequential in point (or cluster) order so results are
//! reproducible bit for bit.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::assignment::{cluster_stats, Assignment, ClusterStats};
use crate::dataset::{group_proportions, Dataset};
use crate::error::{Error, Result};
use crate::squared_euclidean;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterDiscrepancy {
    /// n_i / n
    pub weight: f64,
    /// Σ_j |p_ij − p_j|
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub f: f64,
    pub per_cluster: Vec<ClusterDiscrepancy>,
    pub population: Vec<f64>,
}

/// Size-weighted L1 gap between each cluster's group mix and the population's.
///
/// With two groups the value lies in [0, 1]; with G groups the bound is
/// 2(G−1)/G and the raw value is reported.
pub fn fairness_index(data: &Dataset, assignment: &Assignment) -> FairnessReport {
    let population = group_proportions(data);
    let n = data.len() as f64;
    let per_cluster: Vec<ClusterDiscrepancy> = assignment
        .group_counts(data)
        .iter()
        .zip(assignment.sizes())
        .map(|(counts, &size)| {
            let ni = size as f64;
            let discrepancy = counts
                .iter()
                .zip(&population)
                .map(|(&c, &p)| (c as f64 / ni - p).abs())
                .sum();
            ClusterDiscrepancy {
                weight: ni / n,
                discrepancy,
            }
        })
        .collect();
    let f = per_cluster.iter().map(|c| c.weight * c.discrepancy).sum();
    FairnessReport {
        f,
        per_cluster,
        population,
    }
}

/// Σ_j |c_j − n_i·p_j| for one cluster: its fairness contribution times n.
pub fn discrepancy_mass(group_counts: &[usize], population: &[f64]) -> f64 {
    let size: usize = group_counts.iter().sum();
    group_counts
        .iter()
        .zip(population)
        .map(|(&c, &p)| (c as f64 - size as f64 * p).abs())
        .sum()
}

/// Ratio of two group counts, extended with +∞ for a zero denominator.
///
/// Ordered totally with +∞ greatest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceValue(f64);

impl BalanceValue {
    pub const INFINITE: BalanceValue = BalanceValue(f64::INFINITY);

    pub fn from_counts(numerator: usize, denominator: usize) -> Self {
        match (numerator, denominator) {
            (0, 0) => BalanceValue(1.0),
            (_, 0) => Self::INFINITE,
            (a, b) => BalanceValue(a as f64 / b as f64),
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl Eq for BalanceValue {}

impl PartialOrd for BalanceValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BalanceValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for BalanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for BalanceValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

pub fn balance(stats: &ClusterStats, numerator_group: usize, denominator_group: usize) -> BalanceValue {
    BalanceValue::from_counts(
        stats.group_counts[numerator_group],
        stats.group_counts[denominator_group],
    )
}

/// Σ p_j (1 − p_j) over a probability vector.
pub fn gini(proportions: &[f64]) -> Result<f64> {
    if proportions.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::invalid("gini proportions must be non-negative"));
    }
    let total: f64 = proportions.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "gini proportions sum to {total}, not 1"
        )));
    }
    Ok(proportions.iter().map(|&p| p * (1.0 - p)).sum())
}

/// Gini impurity of a label histogram; 0 for an empty histogram.
pub fn gini_from_counts(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * (1.0 - p)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumOfSquares {
    pub within: f64,
    pub between: f64,
    pub total: f64,
}

pub fn ss_decomposition(data: &Dataset, assignment: &Assignment) -> SumOfSquares {
    let stats = cluster_stats(data, assignment);
    let mean = global_mean(data);
    let within = data
        .rows()
        .zip(assignment.cluster_of())
        .map(|(r, &c)| squared_euclidean(r, &stats[c].centroid))
        .sum();
    let between = stats
        .iter()
        .map(|s| s.size as f64 * squared_euclidean(&s.centroid, &mean))
        .sum();
    let total = data.rows().map(|r| squared_euclidean(r, &mean)).sum();
    SumOfSquares {
        within,
        between,
        total,
    }
}

fn global_mean(data: &Dataset) -> Vec<f64> {
    let mut mean = vec![0.0; data.dim()];
    for r in data.rows() {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    let n = data.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// κ = SS_B / SS_T, the share of dispersion explained by the partition.
pub fn cluster_quality_kappa(data: &Dataset, assignment: &Assignment) -> Result<f64> {
    let first = data.row(0);
    if data.rows().all(|r| r == first) {
        return Err(Error::Degenerate(
            "all points are identical, total sum of squares is zero".into(),
        ));
    }
    let ss = ss_decomposition(data, assignment);
    Ok((ss.between / ss.total).clamp(0.0, 1.0))
}
