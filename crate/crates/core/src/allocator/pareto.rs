use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::fill::{fill_to_target, solve_unchecked};
use super::{evaluate_objectives, AllocationProblem, ObjectiveVector, ParetoPoint, TOL};
use crate::error::AllocError;
use crate::exec::{map_indexed, ExecMode};

/// How objectives are scaled before the weighted sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Raw objective values.
    #[default]
    Raw,
    /// Each objective divided by its range (worst − ideal) over the feasible set.
    IdealWorst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub exec: ExecMode,
    pub normalization: Normalization,
}

impl FrontOptions {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        FrontOptions {
            n_samples,
            seed,
            exec: ExecMode::default(),
            normalization: Normalization::Raw,
        }
    }
}

/// `a` dominates `b` if it is no worse in every objective and strictly
/// better in at least one, up to [`TOL`].
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let mut strictly = false;
    for j in 0..a.len() {
        let (x, y) = (a.get(j), b.get(j));
        if x > y + TOL {
            return false;
        }
        if x < y - TOL {
            strictly = true;
        }
    }
    strictly
}

fn same(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    (0..a.len()).all(|j| (a.get(j) - b.get(j)).abs() <= TOL)
}

/// Keep points no other point dominates. Of several points with the same
/// objective vector only the first is kept. Input order is preserved.
pub fn non_dominated(points: Vec<ParetoPoint>) -> Vec<ParetoPoint> {
    let keep: Vec<bool> = (0..points.len())
        .map(|i| {
            let p = &points[i].objectives;
            !points.iter().any(|q| dominates(&q.objectives, p))
                && !points[..i].iter().any(|q| same(&q.objectives, p))
        })
        .collect();
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Uniform draws on the probability simplex (Dirichlet(1, …, 1)).
pub(crate) fn sample_simplex(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let raw: Vec<f64> = (0..dim).map(|_| Exp1.sample(&mut rng)).collect();
            let sum: f64 = raw.iter().sum();
            if sum > 0.0 {
                break raw.into_iter().map(|x| x / sum).collect();
            }
        })
        .collect()
}

// Range (max − min) of objective j over the feasible set.
fn objective_range(problem: &AllocationProblem, j: usize) -> Result<f64, AllocError> {
    let b = problem.bounds();
    let n = problem.n();
    let col = |f: fn(&super::Bounds) -> f64| b.iter().map(f).collect::<Vec<_>>();
    let (d_lo, d_hi) = (col(|b| b.d_min), col(|b| b.d_max));
    if j == 0 {
        let (h_lo, h_hi) = (col(|b| b.h_min), col(|b| b.h_max));
        let alpha: Vec<f64> = problem.ibrs.iter().map(|i| i.alpha).collect();
        let beta: Vec<f64> = problem.ibrs.iter().map(|i| i.beta).collect();
        let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let dot = |c: &[f64], x: &[f64]| c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let h_min = fill_to_target(&alpha, &h_lo, &h_hi, problem.h_re)?;
        let h_max = fill_to_target(&neg(&alpha), &h_lo, &h_hi, problem.h_re)?;
        let d_min = fill_to_target(&beta, &d_lo, &d_hi, problem.d_re)?;
        let d_max = fill_to_target(&neg(&beta), &d_lo, &d_hi, problem.d_re)?;
        let lo = dot(&alpha, &h_min) + dot(&beta, &d_min);
        let hi = dot(&alpha, &h_max) + dot(&beta, &d_max);
        return Ok(hi - lo);
    }
    let k = j - 1;
    let mut cost = vec![0.0; n];
    cost[k] = -1.0;
    let most = fill_to_target(&cost, &d_lo, &d_hi, problem.d_re)?[k];
    cost[k] = 1.0;
    let least = fill_to_target(&cost, &d_lo, &d_hi, problem.d_re)?[k];
    Ok(most - least)
}

fn effective_weights(weights: &[f64], scale: Option<&[f64]>) -> Vec<f64> {
    match scale {
        None => weights.to_vec(),
        Some(ranges) => {
            let w: Vec<f64> = weights
                .iter()
                .zip(ranges)
                .map(|(w, r)| if *r > TOL { w / r } else { *w })
                .collect();
            let sum: f64 = w.iter().sum();
            w.into_iter().map(|x| x / sum).collect()
        }
    }
}

pub fn pareto_front(problem: &AllocationProblem, n_samples: usize, seed: u64) -> Result<Vec<ParetoPoint>, AllocError> {
    pareto_front_with(problem, &FrontOptions::new(n_samples, seed))
}

/// Sample weight vectors, solve each scalarized problem, and return the
/// non-dominated results in sample order.
pub fn pareto_front_with(problem: &AllocationProblem, opts: &FrontOptions) -> Result<Vec<ParetoPoint>, AllocError> {
    Ok(non_dominated(scalarized_points(problem, opts)?))
}

/// Every scalarized solution of the sampled weights, unfiltered.
///
/// Weight draws happen up front on one seeded stream; only the independent
/// solves are spread over threads, so the output does not depend on `exec`.
pub fn scalarized_points(problem: &AllocationProblem, opts: &FrontOptions) -> Result<Vec<ParetoPoint>, AllocError> {
    if opts.n_samples == 0 {
        return Err(AllocError::InvalidWeights("n_samples must be at least 1".into()));
    }
    let weights = sample_simplex(problem.n_objectives(), opts.n_samples, opts.seed);
    let ranges = match opts.normalization {
        Normalization::Raw => None,
        Normalization::IdealWorst => Some(
            (0..problem.n_objectives())
                .map(|j| objective_range(problem, j))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let solved = map_indexed(&weights, opts.exec, |i, w| {
        let eff = effective_weights(w, ranges.as_deref());
        solve_unchecked(problem, &eff).map(|allocation| ParetoPoint {
            sample: i,
            weights: w.clone(),
            objectives: evaluate_objectives(problem, &allocation),
            allocation,
        })
    });
    solved.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn point(v: &[f64]) -> ParetoPoint {
        ParetoPoint {
            sample: 0,
            weights: vec![],
            allocation: super::super::Allocation { h: vec![], d: vec![] },
            objectives: ObjectiveVector::from_slice(v),
        }
    }

    #[test]
    fn dominance() {
        let a = ObjectiveVector::from_slice(&[1.0, 1.0]);
        let b = ObjectiveVector::from_slice(&[1.0, 2.0]);
        assert!(dominates(&a, &b));
        assert!(!dominates(&b, &a));
        assert!(!dominates(&a, &a));
        let c = ObjectiveVector::from_slice(&[1.0 + 1e-12, 1.0]);
        assert!(!dominates(&a, &c));
    }

    #[test]
    fn filter_drops_dominated_and_duplicates() {
        let pts = vec![
            point(&[1.0, 3.0]),
            point(&[2.0, 2.0]),
            point(&[3.0, 3.0]),
            point(&[1.0, 3.0]),
            point(&[3.0, 1.0]),
        ];
        let front = non_dominated(pts);
        let vals: Vec<Vec<f64>> = front.iter().map(|p| p.objectives.to_vec()).collect();
        assert_eq!(vals, vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]]);
    }

    #[test]
    fn simplex_samples_valid_and_seeded() {
        let a = sample_simplex(9, 50, 7);
        let b = sample_simplex(9, 50, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_simplex(9, 50, 8));
        for w in &a {
            assert!(w.iter().all(|x| *x >= 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_front() {
        let front = pareto_front(&table1_problem(), 1, 3).unwrap();
        assert_eq!(front.len(), 1);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(pareto_front(&table1_problem(), 0, 3).is_err());
    }

    #[test]
    fn exec_modes_identical() {
        let p = table1_problem();
        let mut opts = FrontOptions::new(200, 42);
        opts.exec = ExecMode::Sequential;
        let seq = pareto_front_with(&p, &opts).unwrap();
        opts.exec = ExecMode::Parallel;
        let par = pareto_front_with(&p, &opts).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn normalized_front_is_feasible_and_non_dominated() {
        let p = table1_problem();
        let mut opts = FrontOptions::new(100, 5);
        opts.normalization = Normalization::IdealWorst;
        let front = pareto_front_with(&p, &opts).unwrap();
        assert!(!front.is_empty());
        for a in &front {
            assert!(p.is_feasible(&a.allocation));
            assert!(front.iter().all(|b| !dominates(&b.objectives, &a.objectives)));
        }
    }

    #[test]
    fn ranges_table1() {
        let p = table1_problem();
        // IBR 1 damping ranges from its floor to its ideal share.
        let r = objective_range(&p, 1).unwrap();
        assert!((r - (12.109 * 0.52 - 0.1)).abs() < 1e-9);
        assert!(objective_range(&p, 0).unwrap() > 0.0);
    }
}
