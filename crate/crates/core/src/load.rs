//! CSV ingestion.
//!
//! Column roles come from the caller: one sensitive column, an optional id
//! column, and optionally a list of columns to force into one-hot encoding.
//! Every other column is a feature. A feature column is numeric when every
//! present cell parses as a finite number and categorical when none does;
//! a column that mixes the two is a parse error.

use std::collections::HashMap;
use std::path::Path;

use crate::dataset::{CategoricalEncoding, Dataset, Schema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub sensitive_column: String,
    pub id_column: Option<String>,
    /// Feature columns to one-hot encode even if their cells look numeric.
    pub categorical_columns: Vec<String>,
}

impl LoadOptions {
    pub fn new(sensitive_column: impl Into<String>) -> Self {
        Self {
            sensitive_column: sensitive_column.into(),
            ..Self::default()
        }
    }

    pub fn with_id_column(mut self, column: impl Into<String>) -> Self {
        self.id_column = Some(column.into());
        self
    }

    pub fn with_categorical(mut self, column: impl Into<String>) -> Self {
        self.categorical_columns.push(column.into());
        self
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty()
        || cell == "?"
        || cell.eq_ignore_ascii_case("na")
        || cell.eq_ignore_ascii_case("n/a")
        || cell.eq_ignore_ascii_case("nan")
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, options)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv<R: std::io::Read>(reader: R, options: &LoadOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();

    let find = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                column: name.to_owned(),
            })
    };
    let sensitive_idx = find(&options.sensitive_column)?;
    let id_idx = options.id_column.as_deref().map(find).transpose()?;
    let forced: Vec<usize> = options
        .categorical_columns
        .iter()
        .map(|c| find(c))
        .collect::<Result<_>>()?;
    let feature_cols: Vec<usize> = (0..header.len())
        .filter(|&c| c != sensitive_idx && Some(c) != id_idx)
        .collect();

    // Keep (line number, cells) for complete rows only.
    let mut rows: Vec<(u64, csv::StringRecord)> = Vec::new();
    let mut dropped = 0usize;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().any(is_missing) {
            dropped += 1;
            continue;
        }
        rows.push((line, rec));
    }

    let mut group_names: Vec<String> = Vec::new();
    let mut group_index: HashMap<String, usize> = HashMap::new();
    let sensitive: Vec<usize> = rows
        .iter()
        .map(|(_, rec)| {
            let v = &rec[sensitive_idx];
            *group_index.entry(v.to_owned()).or_insert_with(|| {
                group_names.push(v.to_owned());
                group_names.len() - 1
            })
        })
        .collect();
    if group_names.len() < 2 {
        return Err(Error::invalid(format!(
            "sensitive column '{}' has {} distinct value(s); need at least 2",
            options.sensitive_column,
            group_names.len()
        )));
    }

    enum Encoding {
        Numeric,
        OneHot(Vec<String>, HashMap<String, usize>),
    }
    let mut encodings = Vec::with_capacity(feature_cols.len());
    for &c in &feature_cols {
        let numeric_cells = rows
            .iter()
            .filter(|(_, r)| parse_number(&r[c]).is_some())
            .count();
        if !forced.contains(&c) && numeric_cells == rows.len() {
            encodings.push(Encoding::Numeric);
        } else if forced.contains(&c) || numeric_cells == 0 {
            let mut levels = Vec::new();
            let mut index = HashMap::new();
            for (_, r) in &rows {
                index.entry(r[c].to_owned()).or_insert_with(|| {
                    levels.push(r[c].to_owned());
                    levels.len() - 1
                });
            }
            encodings.push(Encoding::OneHot(levels, index));
        } else {
            let (line, rec) = rows
                .iter()
                .find(|(_, r)| parse_number(&r[c]).is_none())
                .expect("mixed column has a non-numeric cell");
            return Err(Error::Parse {
                line: *line,
                column: header[c].clone(),
                value: rec[c].to_owned(),
            });
        }
    }

    let mut feature_names = Vec::new();
    let mut categorical = Vec::new();
    for (&c, enc) in feature_cols.iter().zip(&encodings) {
        match enc {
            Encoding::Numeric => feature_names.push(header[c].clone()),
            Encoding::OneHot(levels, _) => {
                categorical.push(CategoricalEncoding {
                    column: header[c].clone(),
                    levels: levels.clone(),
                    first_feature: feature_names.len(),
                });
                feature_names.extend(levels.iter().map(|l| format!("{}={l}", header[c])));
            }
        }
    }
    let d = feature_names.len();

    let mut features = Vec::with_capacity(rows.len() * d);
    for (_, rec) in &rows {
        for (&c, enc) in feature_cols.iter().zip(&encodings) {
            match enc {
                Encoding::Numeric => features.push(parse_number(&rec[c]).unwrap()),
                Encoding::OneHot(levels, index) => {
                    let hot = index[&rec[c]];
                    features.extend((0..levels.len()).map(|l| if l == hot { 1.0 } else { 0.0 }));
                }
            }
        }
    }

    let group_count = group_names.len();
    let mut data = Dataset::new(features, d, sensitive, group_count)?.with_schema(Schema {
        feature_names,
        group_names,
        categorical,
        dropped_rows: dropped,
    })?;
    if let Some(id) = id_idx {
        data = data.with_point_ids(rows.iter().map(|(_, r)| r[id].to_owned()).collect())?;
    }
    Ok(data)
}
