//! Second-stage fairness adjustment.
//!
//! Starting from a finished clustering, pick the two clusters whose
//! sensitive-group balance sits at the two extremes, rank the points of
//! those clusters by how close they are to the boundary between them, and
//! move points across until both clusters are within `beta0` of the
//! population balance or the ranking runs out.
//!
//! Two rankings are available:
//! * near-foreign: distance from a point to the *other* cluster's centroid,
//!   closest first;
//! * Gini: impurity of the cluster labels among the point's `knn_k` nearest
//!   neighbours in the full dataset, most mixed first.
//!
//! Scores are computed once per round. By default a switch is accepted only
//! if it strictly reduces the pair imbalance (see [`PairImbalance`]) and does
//! not raise the fairness index; `literal_switch` takes every candidate in
//! order instead. No switch ever empties a cluster.

mod ranking;
mod switch;

use std::collections::BTreeSet;

use serde::Serialize;

pub use ranking::{
    gini_ranking, gini_ranking_from_neighbors, near_foreign_ranking, neighborhood_gini,
    Candidate, CandidateRanking, ScoreOrder,
};
pub use switch::PairImbalance;

use crate::assignment::Assignment;
use crate::config::{validate_knn_k, Heuristic, RunConfig};
use crate::dataset::{group_proportions, Dataset};
use crate::error::{Error, Result};
use crate::metrics::BalanceValue;
use switch::{run_round, RoundParams};

/// The two sensitive groups whose count ratio defines cluster balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupPair {
    pub numerator: usize,
    pub denominator: usize,
}

/// Picks the balance groups for a partition.
///
/// With two groups this is always (0, 1). With more, take the cluster and
/// group with the largest excess over the population share; the numerator
/// is that group and the denominator is the group that cluster lacks most.
pub fn balance_groups(data: &Dataset, group_counts: &[Vec<usize>]) -> GroupPair {
    if data.group_count() == 2 {
        return GroupPair {
            numerator: 0,
            denominator: 1,
        };
    }
    let population = group_proportions(data);
    let deviations = |counts: &[usize]| -> Vec<f64> {
        let size: usize = counts.iter().sum();
        counts
            .iter()
            .zip(&population)
            .map(|(&c, &p)| c as f64 / size as f64 - p)
            .collect()
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, counts) in group_counts.iter().enumerate() {
        for (j, dev) in deviations(counts).into_iter().enumerate() {
            if best.is_none_or(|(b, _, _)| dev > b) {
                best = Some((dev, i, j));
            }
        }
    }
    let (_, cluster, numerator) = best.expect("at least one cluster");
    let devs = deviations(&group_counts[cluster]);
    let denominator = (0..devs.len())
        .filter(|&j| j != numerator)
        .min_by(|&x, &y| devs[x].total_cmp(&devs[y]).then(x.cmp(&y)))
        .expect("at least two groups");
    GroupPair {
        numerator,
        denominator,
    }
}

pub fn cluster_balances(group_counts: &[Vec<usize>], groups: GroupPair) -> Vec<BalanceValue> {
    group_counts
        .iter()
        .map(|c| BalanceValue::from_counts(c[groups.numerator], c[groups.denominator]))
        .collect()
}

/// A and B for one adjustment round; β(A) ≥ β(B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClusterPair {
    pub a: usize,
    pub b: usize,
    pub groups: GroupPair,
}

/// All cluster pairs with differing balance, most extreme first.
///
/// A pair's key is how many clusters sit strictly above its A plus how many
/// sit strictly below its B; ties go to the lower A index, then lower B.
/// The first entry is therefore (argmax β, argmin β) with lowest-index
/// tie-breaking.
pub fn pair_schedule(betas: &[BalanceValue]) -> Vec<(usize, usize)> {
    let above: Vec<usize> = betas
        .iter()
        .map(|b| betas.iter().filter(|o| *o > b).count())
        .collect();
    let below: Vec<usize> = betas
        .iter()
        .map(|b| betas.iter().filter(|o| *o < b).count())
        .collect();
    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (a, beta_a) in betas.iter().enumerate() {
        for (b, beta_b) in betas.iter().enumerate() {
            if beta_a > beta_b {
                pairs.push((above[a] + below[b], above[a], a, b));
            }
        }
    }
    pairs.sort_unstable();
    pairs.into_iter().map(|(_, _, a, b)| (a, b)).collect()
}

/// The clusters with the largest and smallest balance. `None` when every
/// cluster has the same balance, i.e. there is nothing to exchange.
pub fn select_extreme_pair(data: &Dataset, assignment: &Assignment) -> Option<ClusterPair> {
    let counts = assignment.group_counts(data);
    let groups = balance_groups(data, &counts);
    pair_schedule(&cluster_balances(&counts, groups))
        .first()
        .map(|&(a, b)| ClusterPair { a, b, groups })
}

/// True when `|β − β_pop| ≤ β0·β_pop`. An unbounded cluster balance never
/// qualifies.
pub fn balance_enough(cluster: BalanceValue, population: BalanceValue, beta0: f64) -> bool {
    if cluster.is_infinite() {
        return false;
    }
    (cluster.value() - population.value()).abs() <= beta0 * population.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Balanced,
    CandidatesExhausted,
    RoundCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchRecord {
    pub round: usize,
    pub point: usize,
    pub from: usize,
    pub to: usize,
    pub score: f64,
    pub f_before: f64,
    pub f_after: f64,
    /// Balance of the round's A and B after the switch.
    pub beta_a: BalanceValue,
    pub beta_b: BalanceValue,
    pub imbalance: PairImbalance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundSummary {
    pub round: usize,
    pub pair: ClusterPair,
    pub candidates: usize,
    pub switches: usize,
    pub termination: Termination,
    pub f_before: f64,
    pub f_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjustmentTrace {
    pub switches: Vec<SwitchRecord>,
    pub rounds: Vec<RoundSummary>,
    pub assignment: Assignment,
    pub termination: Termination,
}

impl AdjustmentTrace {
    fn unchanged(assignment: &Assignment, termination: Termination) -> Self {
        Self {
            switches: Vec::new(),
            rounds: Vec::new(),
            assignment: assignment.clone(),
            termination,
        }
    }

    pub fn switch_count(&self) -> usize {
        self.switches.len()
    }

    /// Applies the recorded switches, in order, to `input`.
    pub fn replay(&self, input: &Assignment) -> Result<Assignment> {
        let mut out = input.clone();
        for s in &self.switches {
            if out.cluster(s.point) != s.from {
                return Err(Error::Contract(format!(
                    "switch of point {} expects it in cluster {}, found {}",
                    s.point,
                    s.from,
                    out.cluster(s.point)
                )));
            }
            out.reassign(s.point, s.to)?;
        }
        Ok(out)
    }
}

fn ranking_for(
    data: &Dataset,
    assignment: &Assignment,
    pair: &ClusterPair,
    heuristic: Heuristic,
    knn_k: usize,
) -> Result<CandidateRanking> {
    match heuristic {
        Heuristic::NearForeign => Ok(near_foreign_ranking(data, assignment, pair.a, pair.b)),
        Heuristic::Gini => gini_ranking(data, assignment, pair.a, pair.b, knn_k),
        Heuristic::None => Err(Error::invalid("no adjustment heuristic selected")),
    }
}

fn check_inputs(data: &Dataset, assignment: &Assignment, config: &RunConfig) -> Result<()> {
    if assignment.len() != data.len() {
        return Err(Error::invalid(format!(
            "assignment covers {} points, dataset has {}",
            assignment.len(),
            data.len()
        )));
    }
    if assignment.k() < 2 {
        return Err(Error::invalid("fairness adjustment needs at least two clusters"));
    }
    if !(config.beta0 > 0.0 && config.beta0 < 1.0) {
        return Err(Error::invalid(format!(
            "balance tolerance beta0 = {} must lie in (0, 1)",
            config.beta0
        )));
    }
    Ok(())
}

fn single_round(
    data: &Dataset,
    assignment: &Assignment,
    config: &RunConfig,
    heuristic: Heuristic,
) -> Result<AdjustmentTrace> {
    check_inputs(data, assignment, config)?;
    if heuristic == Heuristic::Gini {
        validate_knn_k(config.knn_k, data.len())?;
    }
    let Some(pair) = select_extreme_pair(data, assignment) else {
        return Ok(AdjustmentTrace::unchanged(assignment, Termination::Balanced));
    };
    let ranking = ranking_for(data, assignment, &pair, heuristic, config.knn_k)?;
    adjust_with_ranking(data, assignment, pair, &ranking, config)
}

/// One near-foreign round on the extreme pair.
pub fn fc_near_foreign(
    data: &Dataset,
    assignment: &Assignment,
    config: &RunConfig,
) -> Result<AdjustmentTrace> {
    single_round(data, assignment, config, Heuristic::NearForeign)
}

/// One Gini round on the extreme pair.
pub fn fc_gini(data: &Dataset, assignment: &Assignment, config: &RunConfig) -> Result<AdjustmentTrace> {
    single_round(data, assignment, config, Heuristic::Gini)
}

/// Runs the switch loop for a given pair and a precomputed ranking.
pub fn adjust_with_ranking(
    data: &Dataset,
    assignment: &Assignment,
    pair: ClusterPair,
    ranking: &CandidateRanking,
    config: &RunConfig,
) -> Result<AdjustmentTrace> {
    check_inputs(data, assignment, config)?;
    if let Some(bad) = ranking
        .entries()
        .iter()
        .find(|c| c.source != assignment.cluster(c.point) || (c.source != pair.a && c.source != pair.b))
    {
        return Err(Error::invalid(format!(
            "ranked point {} is not in cluster {} of pair ({}, {})",
            bad.point, bad.source, pair.a, pair.b
        )));
    }
    let mut current = assignment.clone();
    let mut switches = Vec::new();
    let params = RoundParams {
        round: 0,
        beta0: config.beta0,
        literal: config.literal_switch,
    };
    let summary = run_round(data, &mut current, pair, ranking, &params, &mut switches);
    Ok(AdjustmentTrace {
        switches,
        termination: summary.termination,
        rounds: vec![summary],
        assignment: current,
    })
}

/// Repeats pair rounds with the configured heuristic.
///
/// Each round takes the most extreme pair not yet visited in the current
/// sweep; once every pair with differing balance has been visited a new
/// sweep starts. Stops when the chosen pair is already balanced, when a
/// round switches nothing, or after `config.pair_round_cap()` rounds.
pub fn fair_adjust_multi(
    data: &Dataset,
    assignment: &Assignment,
    config: &RunConfig,
) -> Result<AdjustmentTrace> {
    check_inputs(data, assignment, config)?;
    let heuristic = config.heuristic;
    if heuristic == Heuristic::None {
        return Err(Error::invalid("no adjustment heuristic selected"));
    }
    if heuristic == Heuristic::Gini {
        validate_knn_k(config.knn_k, data.len())?;
    }
    let cap = config.pair_round_cap();
    let population = data.group_counts();

    let mut current = assignment.clone();
    let mut switches = Vec::new();
    let mut rounds: Vec<RoundSummary> = Vec::new();
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let termination = loop {
        if rounds.len() >= cap {
            break Termination::RoundCap;
        }
        let counts = current.group_counts(data);
        let groups = balance_groups(data, &counts);
        let betas = cluster_balances(&counts, groups);
        let schedule = pair_schedule(&betas);
        let Some(&first) = schedule.first() else {
            break Termination::Balanced;
        };
        let (a, b) = match schedule.iter().find(|p| !visited.contains(p)) {
            Some(&p) => p,
            None => {
                visited.clear();
                first
            }
        };
        let beta_pop =
            BalanceValue::from_counts(population[groups.numerator], population[groups.denominator]);
        if balance_enough(betas[a], beta_pop, config.beta0)
            && balance_enough(betas[b], beta_pop, config.beta0)
        {
            break Termination::Balanced;
        }
        visited.insert((a, b));

        let pair = ClusterPair { a, b, groups };
        let ranking = ranking_for(data, &current, &pair, heuristic, config.knn_k)?;
        let params = RoundParams {
            round: rounds.len(),
            beta0: config.beta0,
            literal: config.literal_switch,
        };
        let summary = run_round(data, &mut current, pair, &ranking, &params, &mut switches);
        let (made, reason) = (summary.switches, summary.termination);
        rounds.push(summary);
        if made == 0 {
            break reason;
        }
    };
    Ok(AdjustmentTrace {
        switches,
        rounds,
        assignment: current,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fairness_index;

    fn b(v: f64) -> BalanceValue {
        if v.is_infinite() {
            BalanceValue::INFINITE
        } else {
            // exact for the small ratios used here
            BalanceValue::from_counts((v * 100.0).round() as usize, 100)
        }
    }

    #[test]
    fn extreme_pair_by_inspection() {
        assert_eq!(pair_schedule(&[b(4.0), b(1.0), b(0.25)])[0], (0, 2));
        assert_eq!(pair_schedule(&[b(f64::INFINITY), b(1.0)])[0], (0, 1));
        assert!(pair_schedule(&[b(1.0), b(1.0), b(1.0)]).is_empty());
        // ties go to lower indices at both ends
        assert_eq!(pair_schedule(&[b(0.5), b(2.0), b(0.5), b(2.0)])[0], (1, 0));
    }

    #[test]
    fn schedule_lists_every_unequal_pair_once() {
        let s = pair_schedule(&[b(4.0), b(1.0), b(0.25)]);
        assert_eq!(s, vec![(0, 2), (0, 1), (1, 2)]);
    }

    #[test]
    fn balance_enough_cases() {
        let pop = BalanceValue::from_counts(1, 1);
        assert!(balance_enough(BalanceValue::from_counts(105, 100), pop, 0.10));
        assert!(!balance_enough(BalanceValue::from_counts(12, 10), pop, 0.10));
        assert!(!balance_enough(BalanceValue::INFINITE, pop, 0.10));
    }

    #[test]
    fn three_groups_use_most_over_and_under_represented() {
        // population: 4 of g0, 4 of g1, 4 of g2. Cluster 0 is heavy in g2
        // and has no g1.
        let labels = vec![2, 2, 2, 0, 0, 1, 0, 1, 1, 1, 0, 2];
        let n = labels.len();
        let data = Dataset::new((0..n).map(|i| i as f64).collect(), 1, labels, 3).unwrap();
        let a = Assignment::new(vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1], 2).unwrap();
        let groups = balance_groups(&data, &a.group_counts(&data));
        assert_eq!(
            groups,
            GroupPair {
                numerator: 2,
                denominator: 1
            }
        );
    }

    fn boundary_instance() -> (Dataset, Assignment) {
        // Two clusters on a line, cluster 0 heavy in group 0, cluster 1 heavy
        // in group 1, minority points at the inner edges.
        let mut rows = Vec::new();
        let mut groups = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            rows.push(vec![i as f64]);
            groups.push(usize::from(i >= 8));
            labels.push(0);
        }
        for i in 0..10 {
            rows.push(vec![12.0 + i as f64]);
            groups.push(usize::from(i >= 2));
            labels.push(1);
        }
        let data = Dataset::from_rows(&rows, groups).unwrap();
        (data, Assignment::new(labels, 2).unwrap())
    }

    #[test]
    fn already_balanced_pair_is_left_alone() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64]).collect();
        let data = Dataset::from_rows(&rows, vec![0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
        let a = Assignment::new(vec![0, 0, 0, 0, 1, 1, 1, 1], 2).unwrap();
        let cfg = RunConfig::new(2).with_knn_k(3);
        for trace in [
            fc_near_foreign(&data, &a, &cfg).unwrap(),
            fc_gini(&data, &a, &cfg).unwrap(),
        ] {
            assert_eq!(trace.switch_count(), 0);
            assert_eq!(trace.termination, Termination::Balanced);
            assert_eq!(trace.assignment, a);
        }
    }

    #[test]
    fn near_foreign_reduces_fairness_index_and_replays() {
        let (data, a) = boundary_instance();
        let cfg = RunConfig::new(2);
        let trace = fc_near_foreign(&data, &a, &cfg).unwrap();
        assert!(trace.switch_count() > 0);
        let before = fairness_index(&data, &a).f;
        let after = fairness_index(&data, &trace.assignment).f;
        assert!(after < before);
        assert_eq!(trace.replay(&a).unwrap(), trace.assignment);
        assert!((trace.switches.last().unwrap().f_after - after).abs() < 1e-12);
    }

    #[test]
    fn literal_switch_takes_candidates_unconditionally() {
        let (data, a) = boundary_instance();
        let cfg = RunConfig::new(2).with_literal_switch(true);
        let trace = fc_near_foreign(&data, &a, &cfg).unwrap();
        let ranking = near_foreign_ranking(&data, &a, 0, 1);
        // literal mode switches the first ranked candidates verbatim
        let ranked: Vec<usize> = ranking.entries().iter().map(|c| c.point).take(trace.switch_count()).collect();
        let switched: Vec<usize> = trace.switches.iter().map(|s| s.point).collect();
        assert_eq!(ranked, switched);
    }

    #[test]
    fn zero_round_cap_switches_nothing() {
        let (data, a) = boundary_instance();
        let cfg = RunConfig::new(2).with_max_pair_rounds(0);
        let trace = fair_adjust_multi(&data, &a, &cfg).unwrap();
        assert_eq!(trace.switch_count(), 0);
        assert_eq!(trace.termination, Termination::RoundCap);
    }

    #[test]
    fn two_clusters_multi_equals_single_round() {
        let (data, a) = boundary_instance();
        for h in [Heuristic::NearForeign, Heuristic::Gini] {
            let cfg = RunConfig::new(2).with_heuristic(h).with_knn_k(4);
            let multi = fair_adjust_multi(&data, &a, &cfg).unwrap();
            let single = match h {
                Heuristic::NearForeign => fc_near_foreign(&data, &a, &cfg).unwrap(),
                _ => fc_gini(&data, &a, &cfg).unwrap(),
            };
            assert_eq!(multi.rounds.len(), 1);
            assert_eq!(multi.switches, single.switches);
            assert_eq!(multi.assignment, single.assignment);
        }
    }

    #[test]
    fn none_heuristic_is_rejected() {
        let (data, a) = boundary_instance();
        let cfg = RunConfig::new(2).with_heuristic(Heuristic::None);
        assert!(fair_adjust_multi(&data, &a, &cfg).is_err());
    }

    #[test]
    fn replay_detects_mismatched_input() {
        let (data, a) = boundary_instance();
        let trace = fc_near_foreign(&data, &a, &RunConfig::new(2)).unwrap();
        let other = Assignment::new((0..20).map(|i| usize::from(i % 2 == 0)).collect(), 2).unwrap();
        assert!(trace.replay(&other).is_err());
    }
}
