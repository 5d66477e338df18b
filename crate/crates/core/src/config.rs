use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Which boundary-point detector drives the fairness adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    NearForeign,
    Gini,
    None,
}

impl Heuristic {
    pub fn name(self) -> &'static str {
        match self {
            Heuristic::NearForeign => "near_foreign",
            Heuristic::Gini => "gini",
            Heuristic::None => "none",
        }
    }
}

/// Centroid seeding for the first K-means step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMethod {
    /// K distinct data points drawn uniformly without replacement.
    #[default]
    RandomPoints,
    /// D² sampling.
    KMeansPlusPlus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub k: usize,
    pub heuristic: Heuristic,
    pub knn_k: usize,
    pub beta0: f64,
    pub seed: u64,
    pub standardize: bool,
    pub max_kmeans_iters: usize,
    /// `None` means K·(K−1)/2.
    pub max_pair_rounds: Option<usize>,
    /// Switch every ranked candidate in order instead of only the ones that
    /// reduce the pair imbalance.
    pub literal_switch: bool,
    pub init: InitMethod,
}

impl RunConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            heuristic: Heuristic::NearForeign,
            knn_k: 10,
            beta0: 0.10,
            seed: 0,
            standardize: true,
            max_kmeans_iters: 300,
            max_pair_rounds: None,
            literal_switch: false,
            init: InitMethod::RandomPoints,
        }
    }

    pub fn with_heuristic(mut self, heuristic: Heuristic) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn with_knn_k(mut self, knn_k: usize) -> Self {
        self.knn_k = knn_k;
        self
    }

    pub fn with_beta0(mut self, beta0: f64) -> Self {
        self.beta0 = beta0;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_standardize(mut self, standardize: bool) -> Self {
        self.standardize = standardize;
        self
    }

    pub fn with_max_kmeans_iters(mut self, iters: usize) -> Self {
        self.max_kmeans_iters = iters;
        self
    }

    pub fn with_max_pair_rounds(mut self, rounds: usize) -> Self {
        self.max_pair_rounds = Some(rounds);
        self
    }

    pub fn with_literal_switch(mut self, literal: bool) -> Self {
        self.literal_switch = literal;
        self
    }

    pub fn with_init(mut self, init: InitMethod) -> Self {
        self.init = init;
        self
    }

    pub fn pair_round_cap(&self) -> usize {
        self.max_pair_rounds
            .unwrap_or(self.k * self.k.saturating_sub(1) / 2)
    }

    /// Checks the config against a dataset. The neighbourhood size is only
    /// checked when the Gini heuristic is selected.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        let n = data.len();
        if self.k < 2 || self.k > n {
            return Err(Error::invalid(format!(
                "cluster count K = {} must satisfy 2 <= K <= n = {n}",
                self.k
            )));
        }
        if !(self.beta0 > 0.0 && self.beta0 < 1.0) {
            return Err(Error::invalid(format!(
                "balance tolerance beta0 = {} must lie in (0, 1)",
                self.beta0
            )));
        }
        if self.heuristic == Heuristic::Gini {
            validate_knn_k(self.knn_k, n)?;
        }
        Ok(())
    }
}

pub(crate) fn validate_knn_k(knn_k: usize, n: usize) -> Result<()> {
    if knn_k < 1 || knn_k >= n {
        return Err(Error::invalid(format!(
            "neighbourhood size k = {knn_k} must satisfy 1 <= k < n = {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize) -> Dataset {
        let labels = (0..n).map(|i| i % 2).collect();
        Dataset::new((0..n).map(|i| i as f64).collect(), 1, labels, 2).unwrap()
    }

    #[test]
    fn defaults() {
        let c = RunConfig::new(3);
        assert_eq!(c.knn_k, 10);
        assert_eq!(c.beta0, 0.10);
        assert!(c.standardize);
        assert_eq!(c.max_kmeans_iters, 300);
        assert_eq!(c.pair_round_cap(), 3);
        assert_eq!(RunConfig::new(2).pair_round_cap(), 1);
    }

    #[test]
    fn validation_bounds() {
        let d = data(5);
        assert!(RunConfig::new(1).validate(&d).is_err());
        assert!(RunConfig::new(6).validate(&d).is_err());
        assert!(RunConfig::new(5).validate(&d).is_ok());
        assert!(RunConfig::new(2).with_beta0(0.0).validate(&d).is_err());
        assert!(RunConfig::new(2).with_beta0(1.0).validate(&d).is_err());
        let gini = RunConfig::new(2).with_heuristic(Heuristic::Gini);
        assert!(gini.clone().with_knn_k(5).validate(&d).is_err());
        assert!(gini.clone().with_knn_k(0).validate(&d).is_err());
        assert!(gini.with_knn_k(4).validate(&d).is_ok());
    }
}
