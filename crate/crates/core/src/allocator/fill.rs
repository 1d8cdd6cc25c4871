use super::{Allocation, AllocationProblem, TOL};
use crate::error::AllocError;

/// Minimize `Σ cost_k x_k` subject to `Σ x_k = target` and
/// `lo_k <= x_k <= hi_k`.
///
/// Every variable starts at its lower bound; the remaining mass is then
/// poured into variables in ascending order of cost (ties by index) until
/// the target is met. This is exact for a single linear equality over a box.
pub fn fill_to_target(costs: &[f64], lo: &[f64], hi: &[f64], target: f64) -> Result<Vec<f64>, AllocError> {
    debug_assert_eq!(costs.len(), lo.len());
    debug_assert_eq!(costs.len(), hi.len());
    let floor: f64 = lo.iter().sum();
    let ceil: f64 = hi.iter().sum();
    if target < floor - TOL || target > ceil + TOL {
        return Err(AllocError::Infeasible(format!(
            "target {target} outside [{floor}, {ceil}]"
        )));
    }
    let mut x = lo.to_vec();
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));

    let mut remaining = (target - floor).max(0.0);
    for &k in &order {
        if remaining <= 0.0 {
            break;
        }
        let width = hi[k] - lo[k];
        if width <= remaining {
            x[k] = hi[k];
            remaining -= width;
        } else {
            x[k] += remaining;
            remaining = 0.0;
        }
    }
    Ok(x)
}

fn check_weights(weights: &[f64], n_obj: usize) -> Result<(), AllocError> {
    if weights.len() != n_obj {
        return Err(AllocError::InvalidWeights(format!(
            "expected {n_obj} weights, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(AllocError::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(AllocError::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// Exact minimizer of the weighted sum of objectives.
///
/// The weighted objective separates into an inertia part with per-IBR cost
/// `λ0·α_k` and a damping part with cost `λ0·β_k − λ_k` (the constant ideal
/// damping terms drop out), each solved by [`fill_to_target`].
pub fn solve_scalarized(problem: &AllocationProblem, weights: &[f64]) -> Result<Allocation, AllocError> {
    check_weights(weights, problem.n_objectives())?;
    solve_unchecked(problem, weights)
}

pub(super) fn solve_unchecked(problem: &AllocationProblem, weights: &[f64]) -> Result<Allocation, AllocError> {
    let lambda0 = weights[0];
    let b = problem.bounds();
    let h_cost: Vec<f64> = problem.ibrs.iter().map(|i| lambda0 * i.alpha).collect();
    let d_cost: Vec<f64> = problem
        .ibrs
        .iter()
        .zip(&weights[1..])
        .map(|(i, l)| lambda0 * i.beta - l)
        .collect();
    let col = |f: fn(&super::Bounds) -> f64| b.iter().map(f).collect::<Vec<_>>();
    let h = fill_to_target(&h_cost, &col(|b| b.h_min), &col(|b| b.h_max), problem.h_re)?;
    let d = fill_to_target(&d_cost, &col(|b| b.d_min), &col(|b| b.d_max), problem.d_re)?;
    Ok(Allocation { h, d })
}
