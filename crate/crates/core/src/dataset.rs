//! Feature matrix plus sensitive-group labels.
//!
//! A [`Dataset`] is validated once at construction and never mutated
//! afterwards; transforms such as [`standardize`] build a new value.

use serde::Serialize;

use crate::error::{Error, Result};

/// Column bookkeeping carried along for reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Schema {
    pub feature_names: Vec<String>,
    /// Original sensitive values, indexed by dense group label.
    pub group_names: Vec<String>,
    pub categorical: Vec<CategoricalEncoding>,
    /// Rows skipped because a cell was missing.
    pub dropped_rows: usize,
}

/// One-hot expansion of a single categorical input column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoricalEncoding {
    pub column: String,
    /// Levels in order of first appearance; level `i` maps to output column `first_feature + i`.
    pub levels: Vec<String>,
    pub first_feature: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n: usize,
    d: usize,
    sensitive: Vec<usize>,
    group_count: usize,
    point_ids: Option<Vec<String>>,
    schema: Schema,
}

impl Dataset {
    /// Builds a dataset from a row-major `n x d` buffer.
    pub fn new(
        features: Vec<f64>,
        d: usize,
        sensitive: Vec<usize>,
        group_count: usize,
    ) -> Result<Self> {
        let n = sensitive.len();
        if n < 2 {
            return Err(Error::invalid(format!("need at least 2 points, got {n}")));
        }
        if d < 1 {
            return Err(Error::invalid("need at least 1 feature column"));
        }
        if features.len() != n * d {
            return Err(Error::invalid(format!(
                "feature buffer has {} values, expected {n} x {d}",
                features.len()
            )));
        }
        if group_count < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 sensitive groups, got {group_count}"
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite feature value at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        let mut seen = vec![false; group_count];
        for (i, &g) in sensitive.iter().enumerate() {
            if g >= group_count {
                return Err(Error::invalid(format!(
                    "sensitive label {g} of point {i} is outside [0, {group_count})"
                )));
            }
            seen[g] = true;
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("sensitive group {g} has no points")));
        }
        let schema = Schema {
            feature_names: (0..d).map(|j| format!("x{j}")).collect(),
            group_names: (0..group_count).map(|g| g.to_string()).collect(),
            ..Schema::default()
        };
        Ok(Self {
            features,
            n,
            d,
            sensitive,
            group_count,
            point_ids: None,
            schema,
        })
    }

    /// Convenience constructor; the group count is `max(label) + 1`.
    pub fn from_rows(rows: &[Vec<f64>], sensitive: Vec<usize>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("rows have differing lengths"));
        }
        if rows.len() != sensitive.len() {
            return Err(Error::invalid(format!(
                "{} rows but {} sensitive labels",
                rows.len(),
                sensitive.len()
            )));
        }
        let group_count = sensitive.iter().max().map_or(0, |m| m + 1);
        let features = rows.iter().flatten().copied().collect();
        Self::new(features, d, sensitive, group_count)
    }

    pub fn with_point_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n {
            return Err(Error::invalid(format!(
                "{} point ids for {} points",
                ids.len(),
                self.n
            )));
        }
        self.point_ids = Some(ids);
        Ok(self)
    }

    pub fn with_schema(mut self, schema: Schema) -> Result<Self> {
        if schema.feature_names.len() != self.d {
            return Err(Error::invalid("schema feature names do not match column count"));
        }
        if schema.group_names.len() != self.group_count {
            return Err(Error::invalid("schema group names do not match group count"));
        }
        self.schema = schema;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false for a constructed dataset; present for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.d)
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn sensitive(&self) -> &[usize] {
        &self.sensitive
    }

    #[inline]
    pub fn group_of(&self, i: usize) -> usize {
        self.sensitive[i]
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn point_ids(&self) -> Option<&[String]> {
        self.point_ids.as_deref()
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Number of points in each sensitive group.
    pub fn group_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.group_count];
        for &g in &self.sensitive {
            counts[g] += 1;
        }
        counts
    }

    pub(crate) fn with_features(&self, features: Vec<f64>) -> Self {
        debug_assert_eq!(features.len(), self.features.len());
        Self {
            features,
            ..self.clone()
        }
    }
}

/// Share of each sensitive group in the whole dataset.
pub fn group_proportions(data: &Dataset) -> Vec<f64> {
    let n = data.len() as f64;
    data.group_counts()
        .into_iter()
        .map(|c| c as f64 / n)
        .collect()
}

/// Z-scores every feature column using the population standard deviation.
///
/// Columns whose spread is negligible relative to their magnitude are
/// replaced by zeros instead of being divided.
pub fn standardize(data: &Dataset) -> Dataset {
    let n = data.len();
    let d = data.dim();
    let mut out = data.features().to_vec();
    for j in 0..d {
        let mean = data.rows().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = data
            .rows()
            .map(|r| {
                let c = r[j] - mean;
                c * c
            })
            .sum::<f64>()
            / n as f64;
        let sd = var.sqrt();
        let constant = sd <= 1e-12 * mean.abs().max(1.0);
        for i in 0..n {
            let v = &mut out[i * d + j];
            *v = if constant { 0.0 } else { (*v - mean) / sd };
        }
    }
    data.with_features(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(data: &Dataset, j: usize) -> Vec<f64> {
        data.rows().map(|r| r[j]).collect()
    }

    fn moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
        (m, var.sqrt())
    }

    #[test]
    fn rejects_bad_shapes_and_labels() {
        assert!(Dataset::from_rows(&[vec![1.0]], vec![0]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![0, 0]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![f64::NAN]], vec![0, 1]).is_err());
        assert!(Dataset::new(vec![1.0, 2.0, 3.0], 1, vec![0, 2, 0], 3).is_err());
        assert!(Dataset::new(vec![1.0, 2.0], 1, vec![0, 5], 2).is_err());
        assert!(Dataset::new(vec![], 0, vec![0, 1], 2).is_err());
    }

    #[test]
    fn standardize_unit_column() {
        let data = Dataset::from_rows(&[vec![1.0], vec![2.0], vec![3.0]], vec![0, 1, 0]).unwrap();
        let (m, sd) = moments(&column(&standardize(&data), 0));
        assert!(m.abs() < 1e-12);
        assert!((sd - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standardize_constant_column_is_zeroed() {
        let data = Dataset::from_rows(
            &[vec![5.0, 0.1], vec![5.0, 0.1], vec![5.0, 0.1]],
            vec![0, 1, 0],
        )
        .unwrap();
        let z = standardize(&data);
        assert_eq!(column(&z, 0), vec![0.0; 3]);
        assert_eq!(column(&z, 1), vec![0.0; 3]);
    }

    #[test]
    fn standardize_two_columns_recomputed_moments() {
        let rows: Vec<Vec<f64>> = (0..37)
            .map(|i| vec![(i as f64 * 0.37).sin() * 40.0 + 3.0, (i * i % 11) as f64])
            .collect();
        let labels = (0..37).map(|i| i % 2).collect();
        let z = standardize(&Dataset::from_rows(&rows, labels).unwrap());
        for j in 0..2 {
            let (m, sd) = moments(&column(&z, j));
            assert!(m.abs() < 1e-12, "column {j} mean {m}");
            assert!((sd - 1.0).abs() < 1e-12, "column {j} sd {sd}");
        }
    }

    #[test]
    fn standardize_leaves_input_untouched() {
        let data = Dataset::from_rows(&[vec![1.0], vec![3.0]], vec![0, 1]).unwrap();
        let before = data.clone();
        let _ = standardize(&data);
        assert_eq!(data, before);
    }

    #[test]
    fn proportions_small_cases() {
        let d = Dataset::new(vec![0.0, 1.0, 2.0, 3.0], 1, vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(group_proportions(&d), vec![0.5, 0.5]);
        let d = Dataset::new(vec![0.0, 1.0, 2.0, 3.0], 1, vec![0, 0, 0, 1], 2).unwrap();
        assert_eq!(group_proportions(&d), vec![0.75, 0.25]);
    }

    #[test]
    fn proportions_match_tally_on_579_points() {
        // ILPD-shaped: 579 rows, two groups with a roughly 3:1 split.
        let labels: Vec<usize> = (0..579u64)
            .map(|i| usize::from((i.wrapping_mul(2654435761) >> 7) % 4 == 0))
            .collect();
        let data = Dataset::new(vec![0.0; 579], 1, labels.clone(), 2).unwrap();
        let mut tally = [0usize; 2];
        for l in &labels {
            tally[*l] += 1;
        }
        let p = group_proportions(&data);
        assert_eq!(p[0], tally[0] as f64 / 579.0);
        assert_eq!(p[1], tally[1] as f64 / 579.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
