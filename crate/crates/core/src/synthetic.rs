//! Seeded Gaussian test instances.

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::seeded_rng;

/// A generated dataset together with the blob each point was drawn from.
#[derive(Debug, Clone)]
pub struct Planted {
    pub dataset: Dataset,
    pub truth: Vec<usize>,
}

/// Isotropic Gaussian blobs, `per_blob` points around each center.
/// Sensitive labels alternate 0, 1 in generation order.
pub fn gaussian_blobs(centers: &[Vec<f64>], per_blob: usize, sd: f64, seed: u64) -> Result<Planted> {
    let d = centers.first().map_or(0, Vec::len);
    if centers.iter().any(|c| c.len() != d) {
        return Err(Error::invalid("blob centers differ in dimension"));
    }
    let noise = Normal::new(0.0, sd).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = seeded_rng(seed);
    let mut features = Vec::with_capacity(centers.len() * per_blob * d);
    let mut truth = Vec::with_capacity(centers.len() * per_blob);
    for (blob, center) in centers.iter().enumerate() {
        for _ in 0..per_blob {
            features.extend(center.iter().map(|c| c + noise.sample(&mut rng)));
            truth.push(blob);
        }
    }
    let sensitive = (0..truth.len()).map(|i| i % 2).collect();
    Ok(Planted {
        dataset: Dataset::new(features, d, sensitive, 2)?,
        truth,
    })
}

/// Where each blob's majority-group excess is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupLayout {
    /// Group labels shuffled uniformly within each blob.
    Scattered,
    /// The surplus majority points are the ones nearest the other blob; the
    /// rest of the blob is an even shuffle of both groups. The two blobs'
    /// surpluses meet along the boundary.
    #[default]
    BoundaryExcess,
}

/// Two Gaussian blobs with opposite group skew.
#[derive(Debug, Clone)]
pub struct SkewedPair {
    /// Points per blob.
    pub per_blob: usize,
    pub dim: usize,
    /// Blob centers sit at ±separation on the first axis.
    pub separation: f64,
    pub sd: f64,
    /// Share of each blob that belongs to its majority group.
    pub majority_share: f64,
    pub layout: GroupLayout,
    pub seed: u64,
}

impl Default for SkewedPair {
    fn default() -> Self {
        Self {
            per_blob: 300,
            dim: 10,
            separation: 1.5,
            sd: 1.0,
            majority_share: 0.75,
            layout: GroupLayout::BoundaryExcess,
            seed: 0,
        }
    }
}

impl SkewedPair {
    /// Blob 0 is mostly group 0 and blob 1 mostly group 1, with exactly
    /// `round(majority_share · per_blob)` majority points per blob, so the
    /// population is balanced.
    pub fn generate(&self) -> Result<Planted> {
        if self.dim == 0 || self.per_blob == 0 {
            return Err(Error::invalid("need at least one dimension and one point per blob"));
        }
        if !(0.5..=1.0).contains(&self.majority_share) {
            return Err(Error::invalid("majority share must be in [0.5, 1]"));
        }
        let noise = Normal::new(0.0, self.sd).map_err(|e| Error::invalid(e.to_string()))?;
        let mut rng = seeded_rng(self.seed);
        let h = self.per_blob;
        let majority = (self.majority_share * h as f64).round() as usize;
        let surplus = 2 * majority - h;
        let mut features = Vec::with_capacity(2 * h * self.dim);
        let mut sensitive = Vec::with_capacity(2 * h);
        let mut truth = Vec::with_capacity(2 * h);
        for blob in 0..2 {
            let offset = if blob == 0 { -self.separation } else { self.separation };
            let points: Vec<Vec<f64>> = (0..h)
                .map(|_| {
                    (0..self.dim)
                        .map(|axis| if axis == 0 { offset } else { 0.0 } + noise.sample(&mut rng))
                        .collect()
                })
                .collect();
            let mut groups = vec![1 - blob; h];
            match self.layout {
                GroupLayout::Scattered => {
                    groups[..majority].fill(blob);
                    groups.shuffle(&mut rng);
                }
                GroupLayout::BoundaryExcess => {
                    // distance to the boundary plane x = 0, nearest first
                    let mut by_gap: Vec<usize> = (0..h).collect();
                    by_gap.sort_by(|&i, &j| {
                        points[i][0].abs().total_cmp(&points[j][0].abs()).then(i.cmp(&j))
                    });
                    let mut rest = by_gap.split_off(surplus);
                    for &i in &by_gap {
                        groups[i] = blob;
                    }
                    rest.shuffle(&mut rng);
                    for &i in &rest[..majority - surplus] {
                        groups[i] = blob;
                    }
                }
            }
            for (point, g) in points.into_iter().zip(groups) {
                features.extend(point);
                sensitive.push(g);
                truth.push(blob);
            }
        }
        Ok(Planted {
            dataset: Dataset::new(features, self.dim, sensitive, 2)?,
            truth,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skewed_pair_counts_are_exact() {
        for layout in [GroupLayout::Scattered, GroupLayout::BoundaryExcess] {
            let p = SkewedPair {
                per_blob: 100,
                layout,
                ..SkewedPair::default()
            }
            .generate()
            .unwrap();
            let mut counts = [[0usize; 2]; 2];
            for (i, &blob) in p.truth.iter().enumerate() {
                counts[blob][p.dataset.group_of(i)] += 1;
            }
            assert_eq!(counts, [[75, 25], [25, 75]]);
        }
    }

    #[test]
    fn boundary_excess_puts_majority_nearest_the_boundary() {
        let p = SkewedPair {
            per_blob: 200,
            ..SkewedPair::default()
        }
        .generate()
        .unwrap();
        let data = &p.dataset;
        // 150 majority, 50 minority: the 100 points of blob 0 closest to x = 0 are all group 0
        let mut blob0: Vec<usize> = (0..200).collect();
        blob0.sort_by(|&i, &j| data.row(i)[0].abs().total_cmp(&data.row(j)[0].abs()));
        assert!(blob0[..100].iter().all(|&i| data.group_of(i) == 0));
    }

    #[test]
    fn blobs_are_reproducible() {
        let c = vec![vec![5.0, 5.0], vec![-5.0, -5.0]];
        let a = gaussian_blobs(&c, 10, 0.5, 3).unwrap();
        let b = gaussian_blobs(&c, 10, 0.5, 3).unwrap();
        assert_eq!(a.dataset, b.dataset);
    }
}
