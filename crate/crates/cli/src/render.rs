//! Output encodings. JSON keeps full float precision; CSV and text round
//! to six significant digits.

use std::fmt::Write as _;

use crate::report::RunReport;

/// `x` with six significant digits, trailing zeros dropped, in the style
/// of C's `%g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // exponent after rounding to 6 digits
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One row per method.
pub fn csv(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "fairness", "kappa", "switches", "rounds", "termination"])
        .expect("in-memory write");
    let b = &report.baseline;
    w.write_record(["original", &sig6(b.fairness), &sig6(b.kappa), "0", "0", ""])
        .expect("in-memory write");
    for a in &report.adjusted {
        let termination = serde_json::to_value(a.termination).expect("enum serializes");
        w.write_record([
            a.heuristic,
            &sig6(a.fairness),
            &sig6(a.kappa),
            &a.switch_count.to_string(),
            &a.rounds.to_string(),
            termination.as_str().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
}

pub fn text(report: &RunReport) -> String {
    let d = &report.dataset;
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "dataset   {}", d.source);
    let _ = writeln!(out, "points    {} ({} dropped), {} features, {} groups", d.n, d.dropped_rows, d.d, d.groups);
    let props: Vec<String> = d
        .group_names
        .iter()
        .zip(&d.group_proportions)
        .map(|(g, p)| format!("{g}={}", sig6(*p)))
        .collect();
    let _ = writeln!(out, "groups    {}", props.join(" "));
    let _ = writeln!(
        out,
        "config    k={} heuristic={} knn_k={} beta0={} seed={} standardize={}",
        c.k,
        c.heuristic,
        c.knn_k,
        sig6(c.beta0),
        c.seed,
        c.standardize
    );
    let _ = writeln!(
        out,
        "kmeans    {} iterations, converged={}, objective={}",
        report.baseline.iterations,
        report.baseline.converged,
        sig6(report.baseline.objective)
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<14}{:>12}{:>12}{:>10}  termination", "method", "F", "kappa", "switches");
    let b = &report.baseline;
    let _ = writeln!(out, "{:<14}{:>12}{:>12}{:>10}  -", "original", sig6(b.fairness), sig6(b.kappa), 0);
    for a in &report.adjusted {
        let termination = serde_json::to_value(a.termination).expect("enum serializes");
        let _ = writeln!(
            out,
            "{:<14}{:>12}{:>12}{:>10}  {}",
            a.heuristic,
            sig6(a.fairness),
            sig6(a.kappa),
            a.switch_count,
            termination.as_str().unwrap_or_default()
        );
    }
    if let Some(t) = &report.timing {
        let _ = writeln!(out);
        let _ = writeln!(out, "timing    load {} ms, kmeans {} ms, total {} ms", sig6(t.load_ms), sig6(t.kmeans_ms), sig6(t.total_ms));
        for (h, ms) in &t.adjust_ms {
            let _ = writeln!(out, "          {h} {} ms", sig6(*ms));
        }
    }
    out
}
