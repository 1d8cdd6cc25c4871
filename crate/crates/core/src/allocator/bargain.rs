use std::cmp::Ordering;

use serde::Serialize;

use super::fill::solve_unchecked;
use super::pareto::{non_dominated, pareto_front_with, FrontOptions};
use super::{evaluate_objectives, vpp_profit, AllocationProblem, ObjectiveVector, ParetoPoint, TOL};
use crate::error::AllocError;

/// Nash bargaining score of one point against a disagreement point.
///
/// Gains `F^u_j − F_j` not exceeding [`TOL`] count as zero. The Nash
/// product is zero as soon as one gain is zero, which on a front of linear
/// objectives happens often (every point that is worst for some participant
/// has a zero gain). Points are therefore ranked by the number of positive
/// gains first and by the product of the positive gains second; when some
/// point has all gains positive this is exactly maximizing the Nash product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NashScore {
    pub positive_factors: usize,
    /// Sum of `ln` of the positive gains (`-inf` when there are none).
    pub log_positive_product: f64,
    /// Nash product over all gains; zero if any gain is non-positive.
    pub product: f64,
}

impl NashScore {
    pub fn of(objectives: &ObjectiveVector, disagreement: &ObjectiveVector) -> Self {
        let mut positive = 0;
        let mut log_sum = 0.0;
        for j in 0..objectives.len() {
            let gain = disagreement.get(j) - objectives.get(j);
            if gain > TOL {
                positive += 1;
                log_sum += gain.ln();
            }
        }
        let all = positive == objectives.len();
        NashScore {
            positive_factors: positive,
            log_positive_product: if positive == 0 { f64::NEG_INFINITY } else { log_sum },
            product: if all { log_sum.exp() } else { 0.0 },
        }
    }

    /// Product of the positive gains (1 when there are none).
    pub fn positive_product(&self) -> f64 {
        if self.positive_factors == 0 {
            1.0
        } else {
            self.log_positive_product.exp()
        }
    }

    fn rank(&self, other: &Self) -> Ordering {
        self.positive_factors
            .cmp(&other.positive_factors)
            .then(self.log_positive_product.total_cmp(&other.log_positive_product))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BargainResult {
    pub chosen: ParetoPoint,
    /// Index of `chosen` within `front`.
    pub chosen_index: usize,
    /// Worst value of each objective over the front.
    pub disagreement: ObjectiveVector,
    /// Nash product of the chosen point (zero when degenerate).
    pub nash_value: f64,
    pub score: NashScore,
    /// No front member has every gain positive; selection used the
    /// positive-gain fallback ranking.
    pub degenerate: bool,
    pub front: Vec<ParetoPoint>,
}

fn worst_point(front: &[ParetoPoint]) -> ObjectiveVector {
    let m = front[0].objectives.len();
    let worst: Vec<f64> = (0..m)
        .map(|j| {
            front
                .iter()
                .map(|p| p.objectives.get(j))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    ObjectiveVector::from_slice(&worst)
}

/// Select the Nash bargaining solution from a Pareto front.
pub fn nash_bargain(front: Vec<ParetoPoint>) -> Result<BargainResult, AllocError> {
    if front.is_empty() {
        return Err(AllocError::EmptyFront);
    }
    let disagreement = worst_point(&front);
    let scores: Vec<NashScore> = front
        .iter()
        .map(|p| NashScore::of(&p.objectives, &disagreement))
        .collect();
    // Strict comparison keeps the lowest index on ties.
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if s.rank(&scores[best]) == Ordering::Greater {
            best = i;
        }
    }
    let score = scores[best];
    Ok(BargainResult {
        chosen: front[best].clone(),
        chosen_index: best,
        nash_value: score.product,
        degenerate: score.positive_factors < disagreement.len(),
        score,
        disagreement,
        front,
    })
}

/// Bargaining solution compared with the pure cost-minimizing allocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub bargain: BargainResult,
    /// Solution of the cost-only problem (weight 1 on the VPP objective).
    pub economic: ParetoPoint,
    pub economic_score: NashScore,
    /// Relative gain (%) in the bargaining score over the economic point.
    /// Defined when both have the same number of positive gains, in which
    /// case it compares the products of those gains.
    pub nash_gain_pct: Option<f64>,
    /// Extra positive gains of the bargaining point over the economic point.
    pub positive_factor_gain: i64,
    /// Relative increase (%) in VPP regulation cost.
    pub f_vpp_increase_pct: f64,
    /// Relative change (%) in VPP profit, when compensation prices are known.
    pub profit_change_pct: Option<f64>,
}

/// Run the bargaining procedure on a front that also contains the
/// cost-only solution, and report how the two compare.
pub fn compare_single_objective(problem: &AllocationProblem, opts: &FrontOptions) -> Result<Comparison, AllocError> {
    let mut front = pareto_front_with(problem, opts)?;
    let mut weights = vec![0.0; problem.n_objectives()];
    weights[0] = 1.0;
    let allocation = solve_unchecked(problem, &weights)?;
    let economic = ParetoPoint {
        sample: opts.n_samples,
        objectives: evaluate_objectives(problem, &allocation),
        weights,
        allocation,
    };
    front.push(economic.clone());
    let bargain = nash_bargain(non_dominated(front))?;

    let economic_score = NashScore::of(&economic.objectives, &bargain.disagreement);
    let nash_gain_pct = (bargain.score.positive_factors == economic_score.positive_factors
        && economic_score.positive_factors > 0)
        .then(|| (bargain.score.log_positive_product - economic_score.log_positive_product).exp_m1() * 100.0);
    let positive_factor_gain = bargain.score.positive_factors as i64 - economic_score.positive_factors as i64;
    let f_econ = economic.objectives.f_vpp;
    let f_vpp_increase_pct = (bargain.chosen.objectives.f_vpp - f_econ) / f_econ * 100.0;
    let profit_change_pct = match (
        vpp_profit(problem, &bargain.chosen.allocation),
        vpp_profit(problem, &economic.allocation),
    ) {
        (Ok(b), Ok(e)) if e != 0.0 => Some((b - e) / e.abs() * 100.0),
        _ => None,
    };

    Ok(Comparison {
        bargain,
        economic,
        economic_score,
        nash_gain_pct,
        positive_factor_gain,
        f_vpp_increase_pct,
        profit_change_pct,
    })
}
