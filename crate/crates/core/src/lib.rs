//! K-means clustering followed by a fairness adjustment that moves a small
//! number of boundary points between clusters so each cluster's
//! sensitive-group mix moves toward the population mix.
//!
//! The pipeline is:
//!
//! 1. [`load_csv`] and optionally [`standardize`] a [`Dataset`];
//! 2. cluster it with [`run_kmeans`];
//! 3. adjust the result with [`fc_near_foreign`], [`fc_gini`] or
//!    [`fair_adjust_multi`];
//! 4. score both partitions with [`fairness_index`] and
//!    [`cluster_quality_kappa`].

pub mod assignment;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fairadjust;
pub mod kmeans;
pub mod load;
pub mod metrics;
pub mod neighbors;
pub mod rng;
pub mod synthetic;

pub use assignment::{cluster_stats, Assignment, ClusterStats};
pub use config::{Heuristic, InitMethod, RunConfig};
pub use dataset::{group_proportions, standardize, Dataset, Schema};
pub use error::{Error, Result};
pub use fairadjust::{
    balance_enough, fair_adjust_multi, fc_gini, fc_near_foreign, select_extreme_pair,
    AdjustmentTrace, ClusterPair, Termination,
};
pub use kmeans::{assign_points, init_centroids, run_kmeans, update_centroids, Centroids, KMeansOutcome};
pub use load::{load_csv, read_csv, LoadOptions};
pub use metrics::{
    balance, cluster_quality_kappa, fairness_index, gini, ss_decomposition, BalanceValue,
    FairnessReport, SumOfSquares,
};
pub use neighbors::{knn, knn_batch, Neighbor, NeighborSet};

/// Squared Euclidean distance, summed in coordinate order.
#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}
