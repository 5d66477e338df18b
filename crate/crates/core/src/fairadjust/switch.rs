//! The sequential membership-switch loop shared by both heuristics.

use std::cmp::Ordering;

use serde::Serialize;

use super::{balance_enough, ClusterPair, RoundSummary, SwitchRecord, Termination};
use crate::assignment::Assignment;
use crate::dataset::{group_proportions, Dataset};
use crate::fairadjust::ranking::CandidateRanking;
use crate::metrics::{discrepancy_mass, BalanceValue};

/// Σ over the pair of |β − β_pop| / β_pop, where a cluster with unbounded
/// β contributes an unbounded term. Compared first on the number of
/// unbounded terms, then on the finite remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairImbalance {
    pub unbounded_terms: u8,
    pub finite: f64,
}

impl PairImbalance {
    pub fn of(beta_a: BalanceValue, beta_b: BalanceValue, population: BalanceValue) -> Self {
        let pop = population.value();
        let mut out = PairImbalance {
            unbounded_terms: 0,
            finite: 0.0,
        };
        for beta in [beta_a, beta_b] {
            if beta.is_infinite() {
                out.unbounded_terms += 1;
            } else {
                out.finite += (beta.value() - pop).abs() / pop;
            }
        }
        out
    }
}

impl Eq for PairImbalance {}

impl PartialOrd for PairImbalance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PairImbalance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.unbounded_terms
            .cmp(&other.unbounded_terms)
            .then(self.finite.total_cmp(&other.finite))
    }
}

/// Slack, in units of points, when checking that a switch does not raise
/// the fairness index.
const MASS_SLACK: f64 = 1e-9;

struct PairState {
    population: Vec<f64>,
    beta_population: BalanceValue,
    counts: Vec<Vec<usize>>,
    masses: Vec<f64>,
    n: f64,
}

impl PairState {
    fn new(data: &Dataset, assignment: &Assignment, pair: &ClusterPair) -> Self {
        let population = group_proportions(data);
        let pop_counts = data.group_counts();
        let counts = assignment.group_counts(data);
        let masses = counts
            .iter()
            .map(|c| discrepancy_mass(c, &population))
            .collect();
        Self {
            beta_population: BalanceValue::from_counts(
                pop_counts[pair.groups.numerator],
                pop_counts[pair.groups.denominator],
            ),
            population,
            counts,
            masses,
            n: data.len() as f64,
        }
    }

    fn fairness(&self) -> f64 {
        self.masses.iter().sum::<f64>() / self.n
    }

    fn beta(counts: &[usize], pair: &ClusterPair) -> BalanceValue {
        BalanceValue::from_counts(
            counts[pair.groups.numerator],
            counts[pair.groups.denominator],
        )
    }

    fn imbalance(&self, a: &[usize], b: &[usize], pair: &ClusterPair) -> PairImbalance {
        PairImbalance::of(
            Self::beta(a, pair),
            Self::beta(b, pair),
            self.beta_population,
        )
    }

    fn balanced(&self, pair: &ClusterPair, beta0: f64) -> bool {
        let ok = |c: usize| {
            balance_enough(
                Self::beta(&self.counts[c], pair),
                self.beta_population,
                beta0,
            )
        };
        ok(pair.a) && ok(pair.b)
    }
}

pub(crate) struct RoundParams {
    pub round: usize,
    pub beta0: f64,
    pub literal: bool,
}

/// Walks the ranking once, switching points between A and B, and appends
/// accepted switches to `out`.
pub(crate) fn run_round(
    data: &Dataset,
    assignment: &mut Assignment,
    pair: ClusterPair,
    ranking: &CandidateRanking,
    params: &RoundParams,
    out: &mut Vec<SwitchRecord>,
) -> RoundSummary {
    let mut state = PairState::new(data, assignment, &pair);
    let f_entry = state.fairness();
    let mut switches = 0usize;
    let mut termination = Termination::CandidatesExhausted;

    if state.balanced(&pair, params.beta0) {
        termination = Termination::Balanced;
    } else {
        for cand in ranking.entries() {
            let point = cand.point;
            let from = assignment.cluster(point);
            debug_assert_eq!(from, cand.source);
            let to = if from == pair.a { pair.b } else { pair.a };
            if assignment.sizes()[from] == 1 {
                continue;
            }
            let group = data.group_of(point);
            let mut from_counts = state.counts[from].clone();
            let mut to_counts = state.counts[to].clone();
            from_counts[group] -= 1;
            to_counts[group] += 1;
            let from_mass = discrepancy_mass(&from_counts, &state.population);
            let to_mass = discrepancy_mass(&to_counts, &state.population);

            let (a_counts, b_counts) = if from == pair.a {
                (&from_counts, &to_counts)
            } else {
                (&to_counts, &from_counts)
            };
            let imbalance = state.imbalance(a_counts, b_counts, &pair);
            if !params.literal {
                let current = state.imbalance(&state.counts[pair.a], &state.counts[pair.b], &pair);
                if imbalance >= current {
                    continue;
                }
                let mass_delta =
                    (from_mass + to_mass) - (state.masses[from] + state.masses[to]);
                if mass_delta > MASS_SLACK {
                    continue;
                }
            }

            let f_before = state.fairness();
            assignment
                .reassign(point, to)
                .expect("source cluster keeps at least one point");
            state.counts[from] = from_counts;
            state.counts[to] = to_counts;
            state.masses[from] = from_mass;
            state.masses[to] = to_mass;
            switches += 1;
            out.push(SwitchRecord {
                round: params.round,
                point,
                from,
                to,
                score: cand.score,
                f_before,
                f_after: state.fairness(),
                beta_a: PairState::beta(&state.counts[pair.a], &pair),
                beta_b: PairState::beta(&state.counts[pair.b], &pair),
                imbalance,
            });
            if state.balanced(&pair, params.beta0) {
                termination = Termination::Balanced;
                break;
            }
        }
    }

    RoundSummary {
        round: params.round,
        pair,
        candidates: ranking.len(),
        switches,
        termination,
        f_before: f_entry,
        f_after: state.fairness(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imbalance_orders_unbounded_terms_first() {
        let pop = BalanceValue::from_counts(1, 1);
        let inf_one = PairImbalance::of(BalanceValue::INFINITE, BalanceValue::from_counts(1, 20), pop);
        let inf_two = PairImbalance::of(BalanceValue::INFINITE, BalanceValue::INFINITE, pop);
        let finite = PairImbalance::of(BalanceValue::from_counts(30, 1), BalanceValue::from_counts(0, 5), pop);
        assert!(inf_one < inf_two);
        assert!(finite < inf_one);
        assert_eq!(finite.finite, 29.0 + 1.0);
        let closer = PairImbalance::of(BalanceValue::INFINITE, BalanceValue::from_counts(2, 20), pop);
        assert!(closer < inf_one);
    }
}
