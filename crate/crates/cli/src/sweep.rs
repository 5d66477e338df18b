//! Gini adjustment repeated over several neighbourhood sizes.

use fairkm_core::{fairness_index, Heuristic};

use crate::args::{HeuristicChoice, SweepArgs};
use crate::error::CliError;
use crate::render::sig6;
use crate::report::{adjust, baseline, load, prepare};

/// CSV with one row for the baseline, one per knn_k for Gini and, with
/// `--heuristic both`, one for near-foreign, which does not depend on knn_k.
pub fn sweep(args: &SweepArgs) -> Result<String, CliError> {
    if !matches!(args.heuristic, HeuristicChoice::Gini | HeuristicChoice::Both) {
        return Err(CliError::Usage(
            "sweep varies the Gini neighbourhood size; use --heuristic gini or both".into(),
        ));
    }
    if args.knn_sweep.contains(&0) {
        return Err(CliError::Usage("--knn-sweep values must be at least 1".into()));
    }
    args.tuning.check(args.k).map_err(CliError::Usage)?;

    let raw = load(&args.data)?;
    let source = args.data.input.display().to_string();
    let config = args.tuning.config(args.k);
    let data = prepare(&raw, &config);
    let base = baseline(&data, &config, &source)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["method", "knn_k", "fairness", "kappa", "switches"];
    w.write_record(header).expect("in-memory write");
    let f0 = fairness_index(&data, &base.assignment).f;
    w.write_record(["original", "", &sig6(f0), &sig6(base.baseline.kappa), "0"])
        .expect("in-memory write");
    if args.heuristic == HeuristicChoice::Both {
        let a = adjust(&data, &base.assignment, &config, Heuristic::NearForeign, &source)?;
        w.write_record([a.heuristic, "", &sig6(a.fairness), &sig6(a.kappa), &a.switch_count.to_string()])
            .expect("in-memory write");
    }
    for &kk in &args.knn_sweep {
        let cfg = config.clone().with_knn_k(kk);
        let a = adjust(&data, &base.assignment, &cfg, Heuristic::Gini, &format!("{source} (knn_k = {kk})"))?;
        w.write_record([
            a.heuristic,
            &kk.to_string(),
            &sig6(a.fairness),
            &sig6(a.kappa),
            &a.switch_count.to_string(),
        ])
        .expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output"))
}
