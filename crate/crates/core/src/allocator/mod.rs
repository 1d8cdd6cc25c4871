//! Allocation of the required VPP inertia and damping across IBRs.
//!
//! The model has N + 1 objectives, all minimized: the VPP's regulation cost
//! `Σ α_k H_k + β_k D_k` and, for every IBR, the shortfall of its damping
//! from the share matching its reserve (`D_re · P_a,k / ΔP − D_k`). The
//! equality constraints `Σ H_k = H_re`, `Σ D_k = D_re` and per-IBR boxes
//! define the feasible set.

mod bargain;
mod fill;
mod pareto;

use serde::{Deserialize, Serialize};

use crate::error::{AllocError, ParamError};
use crate::params::{non_negative, positive};

pub use bargain::{compare_single_objective, nash_bargain, BargainResult, Comparison, NashScore};
pub use fill::{fill_to_target, solve_scalarized};
pub use pareto::{
    dominates, non_dominated, pareto_front, pareto_front_with, scalarized_points, FrontOptions, Normalization,
};

/// Tolerance for equality-constraint checks and objective comparisons.
pub const TOL: f64 = 1e-9;

/// One inverter-based resource.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IbrSpec {
    /// Inertia cost coefficient (cost/s).
    pub alpha: f64,
    /// Damping cost coefficient (cost/p.u.).
    pub beta: f64,
    /// Rated reserve power (p.u.).
    pub p_rated: f64,
    /// Maximum regulation injection (p.u.); defaults to `p_rated`.
    pub p_available: Option<f64>,
    pub h_min: f64,
    /// Inertia ceiling (s); defaults to `h_re · P_a / ΔP`.
    pub h_max: Option<f64>,
    pub d_min: f64,
    /// Damping ceiling (p.u.); defaults to the ideal damping `d_re · P_a / ΔP`.
    pub d_max: Option<f64>,
}

impl IbrSpec {
    pub fn new(alpha: f64, beta: f64, p_rated: f64, h_min: f64, d_min: f64) -> Self {
        IbrSpec {
            alpha,
            beta,
            p_rated,
            p_available: None,
            h_min,
            h_max: None,
            d_min,
            d_max: None,
        }
    }

    pub fn p_a(&self) -> f64 {
        self.p_available.unwrap_or(self.p_rated)
    }
}

/// Compensation prices paid by the grid for inertia and damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Compensation {
    pub a: f64,
    pub b: f64,
}

/// Per-IBR box after defaults are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub h_min: f64,
    pub h_max: f64,
    pub d_min: f64,
    pub d_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationProblem {
    pub ibrs: Vec<IbrSpec>,
    pub h_re: f64,
    pub d_re: f64,
    pub delta_p: f64,
    pub compensation: Option<Compensation>,
    bounds: Vec<Bounds>,
}

impl AllocationProblem {
    pub fn new(
        ibrs: Vec<IbrSpec>,
        h_re: f64,
        d_re: f64,
        delta_p: f64,
        compensation: Option<Compensation>,
    ) -> Result<Self, AllocError> {
        if ibrs.is_empty() {
            return Err(ParamError::Invalid("at least one IBR is required".into()).into());
        }
        non_negative("h_re", h_re)?;
        non_negative("d_re", d_re)?;
        positive("delta_p", delta_p)?;
        let mut bounds = Vec::with_capacity(ibrs.len());
        for (k, ibr) in ibrs.iter().enumerate() {
            positive("alpha", ibr.alpha)?;
            positive("beta", ibr.beta)?;
            positive("p_rated", ibr.p_rated)?;
            positive("p_available", ibr.p_a())?;
            non_negative("h_min", ibr.h_min)?;
            non_negative("d_min", ibr.d_min)?;
            let share = ibr.p_a() / delta_p;
            let b = Bounds {
                h_min: ibr.h_min,
                h_max: ibr.h_max.unwrap_or(h_re * share),
                d_min: ibr.d_min,
                d_max: ibr.d_max.unwrap_or(d_re * share),
            };
            if b.h_max.is_nan() || b.h_max < b.h_min || b.d_max.is_nan() || b.d_max < b.d_min {
                return Err(AllocError::Infeasible(format!(
                    "IBR {} has an empty box: H in [{}, {}], D in [{}, {}]",
                    k + 1,
                    b.h_min,
                    b.h_max,
                    b.d_min,
                    b.d_max
                )));
            }
            bounds.push(b);
        }
        let sum = |f: fn(&Bounds) -> f64| bounds.iter().map(f).sum::<f64>();
        let (h_lo, h_hi) = (sum(|b| b.h_min), sum(|b| b.h_max));
        let (d_lo, d_hi) = (sum(|b| b.d_min), sum(|b| b.d_max));
        if h_re < h_lo - TOL || h_re > h_hi + TOL {
            return Err(AllocError::Infeasible(format!(
                "H_re = {h_re} outside [{h_lo}, {h_hi}]"
            )));
        }
        if d_re < d_lo - TOL || d_re > d_hi + TOL {
            return Err(AllocError::Infeasible(format!(
                "D_re = {d_re} outside [{d_lo}, {d_hi}]"
            )));
        }
        Ok(AllocationProblem {
            ibrs,
            h_re,
            d_re,
            delta_p,
            compensation,
            bounds,
        })
    }

    pub fn n(&self) -> usize {
        self.ibrs.len()
    }

    /// Number of objectives (VPP cost plus one per IBR).
    pub fn n_objectives(&self) -> usize {
        self.ibrs.len() + 1
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    /// Damping that fully uses IBR `k`'s reserve.
    pub fn ideal_damping(&self, k: usize) -> f64 {
        self.d_re * self.ibrs[k].p_a() / self.delta_p
    }

    pub fn is_feasible(&self, alloc: &Allocation) -> bool {
        alloc.h.len() == self.n()
            && alloc.d.len() == self.n()
            && (alloc.h.iter().sum::<f64>() - self.h_re).abs() <= TOL
            && (alloc.d.iter().sum::<f64>() - self.d_re).abs() <= TOL
            && self.bounds.iter().zip(alloc.h.iter().zip(&alloc.d)).all(|(b, (&h, &d))| {
                h >= b.h_min && h <= b.h_max && d >= b.d_min && d <= b.d_max
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allocation {
    /// Per-IBR virtual inertia (s).
    pub h: Vec<f64>,
    /// Per-IBR virtual damping (p.u.).
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveVector {
    pub f_vpp: f64,
    pub f_ibr: Vec<f64>,
}

impl ObjectiveVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.f_ibr.len() + 1);
        v.push(self.f_vpp);
        v.extend_from_slice(&self.f_ibr);
        v
    }

    pub fn from_slice(v: &[f64]) -> Self {
        ObjectiveVector {
            f_vpp: v[0],
            f_ibr: v[1..].to_vec(),
        }
    }

    pub fn get(&self, j: usize) -> f64 {
        if j == 0 {
            self.f_vpp
        } else {
            self.f_ibr[j - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.f_ibr.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    /// Index of the weight sample that produced this point.
    pub sample: usize,
    pub weights: Vec<f64>,
    pub allocation: Allocation,
    pub objectives: ObjectiveVector,
}

pub fn evaluate_objectives(problem: &AllocationProblem, alloc: &Allocation) -> ObjectiveVector {
    let f_vpp = problem
        .ibrs
        .iter()
        .zip(alloc.h.iter().zip(&alloc.d))
        .map(|(ibr, (h, d))| ibr.alpha * h + ibr.beta * d)
        .sum();
    let f_ibr = (0..problem.n())
        .map(|k| problem.ideal_damping(k) - alloc.d[k])
        .collect();
    ObjectiveVector { f_vpp, f_ibr }
}

/// Net VPP profit: compensation for the required pair minus regulation cost.
pub fn vpp_profit(problem: &AllocationProblem, alloc: &Allocation) -> Result<f64, AllocError> {
    let c = problem.compensation.ok_or(AllocError::MissingCompensation)?;
    let cost = evaluate_objectives(problem, alloc).f_vpp;
    Ok(c.a * problem.h_re + c.b * problem.d_re - cost)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const ALPHA: [f64; 8] = [3.0, 4.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0];
    pub const BETA: [f64; 8] = [2.0, 3.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1.0];
    pub const P_RATED: [f64; 8] = [0.13, 0.1, 0.04, 0.05, 0.05, 0.1, 0.02, 0.01];

    pub fn table1_ibrs() -> Vec<IbrSpec> {
        (0..8)
            .map(|k| IbrSpec::new(ALPHA[k], BETA[k], P_RATED[k], 0.1, 0.1))
            .collect()
    }

    pub fn table1_problem() -> AllocationProblem {
        AllocationProblem::new(table1_ibrs(), 19.125, 12.109, 0.25, None).unwrap()
    }
}
