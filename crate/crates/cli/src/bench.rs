//! Original, near-foreign and Gini side by side for a list of datasets.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fairkm_core::Heuristic;
use rayon::prelude::*;
use serde::Deserialize;

use crate::args::{BenchArgs, DataArgs, Format};
use crate::error::CliError;
use crate::render::sig6;
use crate::report::{adjust, baseline, load, prepare};

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sensitive_col: String,
    pub k: usize,
    #[serde(default)]
    pub id_col: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub dataset: String,
    pub n: usize,
    pub k: usize,
    pub original: (f64, f64),
    pub near_foreign: (f64, f64),
    pub gini: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct BenchFailure {
    pub dataset: String,
    pub message: String,
}

pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub failures: Vec<BenchFailure>,
}

/// A row the manifest parser could not read is reported under its line.
fn read_manifest(path: &Path) -> Result<Vec<Result<ManifestEntry, BenchFailure>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::data(path.display().to_string(), e.into()))?;
    let entries = reader
        .deserialize::<ManifestEntry>()
        .enumerate()
        .map(|(i, r)| {
            r.map(|mut e| {
                e.id_col = e.id_col.filter(|s| !s.is_empty());
                e
            })
            .map_err(|err| BenchFailure {
                dataset: format!("{} line {}", path.display(), i + 2),
                message: err.to_string(),
            })
        })
        .collect();
    Ok(entries)
}

fn run_entry(entry: &ManifestEntry, base_dir: &Path, args: &BenchArgs) -> Result<BenchRow, CliError> {
    args.tuning.check(entry.k).map_err(CliError::Usage)?;
    let data_args = DataArgs {
        input: base_dir.join(&entry.path),
        sensitive_col: entry.sensitive_col.clone(),
        id_col: entry.id_col.clone(),
        categorical: Vec::new(),
    };
    let raw = load(&data_args)?;
    let config = args.tuning.config(entry.k);
    let data = prepare(&raw, &config);
    let source = entry.path.clone();
    let base = baseline(&data, &config, &source)?;
    let nf = adjust(&data, &base.assignment, &config, Heuristic::NearForeign, &source)?;
    let gini = adjust(&data, &base.assignment, &config, Heuristic::Gini, &source)?;
    Ok(BenchRow {
        dataset: entry.path.clone(),
        n: data.len(),
        k: entry.k,
        original: (base.baseline.fairness, base.baseline.kappa),
        near_foreign: (nf.fairness, nf.kappa),
        gini: (gini.fairness, gini.kappa),
    })
}

/// Processes manifest entries concurrently; output order follows the manifest.
pub fn bench(args: &BenchArgs) -> Result<BenchOutcome, CliError> {
    let entries = read_manifest(&args.manifest)?;
    let base_dir: PathBuf = args
        .manifest
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let results: Vec<Result<BenchRow, BenchFailure>> = entries
        .par_iter()
        .map(|entry| {
            let entry = entry.as_ref().map_err(Clone::clone)?;
            run_entry(entry, &base_dir, args).map_err(|e| BenchFailure {
                dataset: entry.path.clone(),
                message: e.to_string(),
            })
        })
        .collect();
    let mut outcome = BenchOutcome {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(row) => outcome.rows.push(row),
            Err(f) => outcome.failures.push(f),
        }
    }
    Ok(outcome)
}

const COLUMNS: [&str; 9] = [
    "dataset",
    "n",
    "k",
    "original_f",
    "original_kappa",
    "near_foreign_f",
    "near_foreign_kappa",
    "gini_f",
    "gini_kappa",
];

fn cells(row: &BenchRow) -> [String; 9] {
    [
        row.dataset.clone(),
        row.n.to_string(),
        row.k.to_string(),
        sig6(row.original.0),
        sig6(row.original.1),
        sig6(row.near_foreign.0),
        sig6(row.near_foreign.1),
        sig6(row.gini.0),
        sig6(row.gini.1),
    ]
}

pub fn render(outcome: &BenchOutcome, format: Format) -> String {
    match format {
        Format::Text => {
            let mut table = vec![COLUMNS.map(String::from)];
            table.extend(outcome.rows.iter().map(cells));
            let widths: Vec<usize> = (0..COLUMNS.len())
                .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for row in &table {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(c, (cell, w))| if c == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
            if !outcome.failures.is_empty() {
                let _ = writeln!(out, "\nfailed:");
                for f in &outcome.failures {
                    let _ = writeln!(out, "  {}: {}", f.dataset, f.message);
                }
            }
            out
        }
        // JSON is not offered for bench; CSV covers machine use
        Format::Csv | Format::Json => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for row in &outcome.rows {
                w.write_record(cells(row)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
        }
    }
}
