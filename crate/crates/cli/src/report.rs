//! The run pipeline and its serializable report.
//!
//! Field order in these structs is the field order of the JSON output.

use std::time::Instant;

use fairkm_core::fairadjust::{balance_groups, cluster_balances, GroupPair, RoundSummary, SwitchRecord};
use fairkm_core::{
    cluster_quality_kappa, fair_adjust_multi, fairness_index, load_csv, run_kmeans, ss_decomposition,
    standardize, Assignment, BalanceValue, Dataset, Heuristic, LoadOptions, RunConfig, SumOfSquares,
    Termination,
};
use serde::Serialize;

use crate::args::{DataArgs, HeuristicChoice};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub dataset: DatasetSummary,
    pub config: ConfigEcho,
    pub baseline: Baseline,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub adjusted: Vec<Adjusted>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetSummary {
    pub source: String,
    pub n: usize,
    pub d: usize,
    pub groups: usize,
    pub group_names: Vec<String>,
    pub group_proportions: Vec<f64>,
    pub features: Vec<String>,
    pub dropped_rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_ids: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub k: usize,
    pub heuristic: &'static str,
    pub knn_k: usize,
    pub beta0: f64,
    pub seed: u64,
    pub standardize: bool,
    pub literal_switch: bool,
    pub max_kmeans_iters: usize,
    pub max_pair_rounds: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub size: usize,
    pub group_counts: Vec<usize>,
    /// n_i / n
    pub weight: f64,
    /// Σ_j |p_ij − p_j|
    pub discrepancy: f64,
    pub balance: BalanceValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct Baseline {
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub fairness: f64,
    pub kappa: f64,
    pub sum_of_squares: SumOfSquares,
    pub balance_groups: GroupPair,
    pub clusters: Vec<ClusterSummary>,
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub rounds: Vec<RoundSummary>,
    pub switches: Vec<SwitchRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Adjusted {
    pub heuristic: &'static str,
    pub fairness: f64,
    pub kappa: f64,
    pub switch_count: usize,
    pub rounds: usize,
    pub termination: Termination,
    pub balance_groups: GroupPair,
    pub clusters: Vec<ClusterSummary>,
    pub assignment: Vec<usize>,
    pub trace: Trace,
}

/// Milliseconds per stage.
#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub load_ms: f64,
    pub kmeans_ms: f64,
    pub adjust_ms: Vec<(String, f64)>,
    pub total_ms: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn load(args: &DataArgs) -> Result<Dataset, CliError> {
    let mut opts = LoadOptions::new(&args.sensitive_col);
    if let Some(id) = &args.id_col {
        opts = opts.with_id_column(id);
    }
    for c in &args.categorical {
        opts = opts.with_categorical(c);
    }
    load_csv(&args.input, &opts).map_err(|e| CliError::data(args.input.display().to_string(), e))
}

/// Feature scaling as configured.
pub fn prepare(raw: &Dataset, config: &RunConfig) -> Dataset {
    if config.standardize {
        standardize(raw)
    } else {
        raw.clone()
    }
}

fn cluster_summaries(data: &Dataset, assignment: &Assignment) -> (GroupPair, Vec<ClusterSummary>) {
    let counts = assignment.group_counts(data);
    let groups = balance_groups(data, &counts);
    let betas = cluster_balances(&counts, groups);
    let fair = fairness_index(data, assignment);
    let clusters = counts
        .into_iter()
        .zip(betas)
        .zip(fair.per_cluster)
        .enumerate()
        .map(|(cluster, ((group_counts, balance), disc))| ClusterSummary {
            cluster,
            size: group_counts.iter().sum(),
            group_counts,
            weight: disc.weight,
            discrepancy: disc.discrepancy,
            balance,
        })
        .collect();
    (groups, clusters)
}

fn kappa(data: &Dataset, assignment: &Assignment, context: &str) -> Result<f64, CliError> {
    cluster_quality_kappa(data, assignment).map_err(|e| CliError::data(context, e))
}

pub struct BaselineRun {
    pub baseline: Baseline,
    pub assignment: Assignment,
}

pub fn baseline(data: &Dataset, config: &RunConfig, context: &str) -> Result<BaselineRun, CliError> {
    config.validate(data).map_err(|e| CliError::data(context, e))?;
    let km = run_kmeans(data, config).map_err(|e| CliError::data(context, e))?;
    let (balance_groups, clusters) = cluster_summaries(data, &km.assignment);
    let baseline = Baseline {
        iterations: km.iterations,
        converged: km.converged,
        objective: km.objective,
        fairness: fairness_index(data, &km.assignment).f,
        kappa: kappa(data, &km.assignment, context)?,
        sum_of_squares: ss_decomposition(data, &km.assignment),
        balance_groups,
        clusters,
        assignment: km.assignment.cluster_of().to_vec(),
    };
    Ok(BaselineRun {
        baseline,
        assignment: km.assignment,
    })
}

pub fn adjust(
    data: &Dataset,
    start: &Assignment,
    config: &RunConfig,
    heuristic: Heuristic,
    context: &str,
) -> Result<Adjusted, CliError> {
    let cfg = config.clone().with_heuristic(heuristic);
    let trace = fair_adjust_multi(data, start, &cfg).map_err(|e| CliError::data(context, e))?;
    let (balance_groups, clusters) = cluster_summaries(data, &trace.assignment);
    Ok(Adjusted {
        heuristic: heuristic.name(),
        fairness: fairness_index(data, &trace.assignment).f,
        kappa: kappa(data, &trace.assignment, context)?,
        switch_count: trace.switch_count(),
        rounds: trace.rounds.len(),
        termination: trace.termination,
        balance_groups,
        clusters,
        assignment: trace.assignment.cluster_of().to_vec(),
        trace: Trace {
            rounds: trace.rounds,
            switches: trace.switches,
        },
    })
}

pub fn echo(config: &RunConfig, heuristic: HeuristicChoice) -> ConfigEcho {
    ConfigEcho {
        k: config.k,
        heuristic: heuristic.name(),
        knn_k: config.knn_k,
        beta0: config.beta0,
        seed: config.seed,
        standardize: config.standardize,
        literal_switch: config.literal_switch,
        max_kmeans_iters: config.max_kmeans_iters,
        max_pair_rounds: config.pair_round_cap(),
    }
}

pub fn summarize(source: &str, data: &Dataset) -> DatasetSummary {
    let schema = data.schema();
    DatasetSummary {
        source: source.to_string(),
        n: data.len(),
        d: data.dim(),
        groups: data.group_count(),
        group_names: schema.group_names.clone(),
        group_proportions: fairkm_core::group_proportions(data),
        features: schema.feature_names.clone(),
        dropped_rows: schema.dropped_rows,
        point_ids: data.point_ids().map(<[String]>::to_vec),
    }
}

/// Full pipeline for the `run` subcommand.
pub fn build(
    data_args: &DataArgs,
    config: &RunConfig,
    heuristic: HeuristicChoice,
    with_timing: bool,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let raw = load(data_args)?;
    let load_ms = millis(start);
    let source = data_args.input.display().to_string();
    let data = prepare(&raw, config);

    let km_start = Instant::now();
    let base = baseline(&data, config, &source)?;
    let kmeans_ms = millis(km_start);

    let mut adjusted = Vec::new();
    let mut adjust_ms = Vec::new();
    for h in heuristic.expand() {
        let t = Instant::now();
        adjusted.push(adjust(&data, &base.assignment, config, h, &source)?);
        adjust_ms.push((h.name().to_string(), millis(t)));
    }

    Ok(RunReport {
        dataset: summarize(&source, &raw),
        config: echo(config, heuristic),
        baseline: base.baseline,
        adjusted,
        timing: with_timing.then(|| Timing {
            load_ms,
            kmeans_ms,
            adjust_ms,
            total_ms: millis(start),
        }),
    })
}
