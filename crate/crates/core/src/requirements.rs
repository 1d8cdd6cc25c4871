//! Feasible (H_vpp, D_vpp) region and the minimal required pair.
//!
//! The region is the intersection of four conditions: a RoCoF lower bound
//! on inertia, a nadir bound, a quasi-steady-state lower bound on damping,
//! and the parameter box. The requirement is found in two stages: damping
//! first from the Qss bound (Qss does not depend on inertia), then the
//! smallest inertia that satisfies both the RoCoF and nadir bounds at that
//! damping.

use serde::{Deserialize, Serialize};

use crate::error::{FreqError, ParamError, RequirementError};
use crate::exec::{map_indexed, ExecMode};
use crate::freq_model::{self, FreqMetrics};
use crate::ode_oracle::{self, SimConfig};
use crate::params::{positive, Disturbance, GridParams, VppParams};

/// Default box bound on VPP inertia (s) when none is configured.
pub const DEFAULT_H_VPP_MAX: f64 = 50.0;
/// Default box bound on VPP damping (p.u.) when none is configured.
pub const DEFAULT_D_VPP_MAX: f64 = 50.0;
/// Bisection tolerance on inertia (s).
pub const INERTIA_TOL: f64 = 1e-3;
/// Slack (Hz, Hz/s) allowed when comparing a metric against its limit.
pub const LIMIT_SLACK: f64 = 1e-5;

const MONOTONE_PROBES: usize = 50;
const SCAN_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityLimits {
    /// RoCoF limit (Hz/s).
    pub rocof_lim: f64,
    /// Nadir limit (Hz).
    pub nadir_lim: f64,
    /// Quasi-steady-state limit (Hz).
    pub qss_lim: f64,
    pub h_vpp_max: f64,
    pub d_vpp_max: f64,
}

impl SecurityLimits {
    pub fn new(rocof_lim: f64, nadir_lim: f64, qss_lim: f64) -> Self {
        SecurityLimits {
            rocof_lim,
            nadir_lim,
            qss_lim,
            h_vpp_max: DEFAULT_H_VPP_MAX,
            d_vpp_max: DEFAULT_D_VPP_MAX,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        positive("rocof_lim", self.rocof_lim)?;
        positive("nadir_lim", self.nadir_lim)?;
        positive("qss_lim", self.qss_lim)?;
        positive("h_vpp_max", self.h_vpp_max)?;
        positive("d_vpp_max", self.d_vpp_max)?;
        if self.qss_lim > self.nadir_lim {
            return Err(ParamError::Invalid(format!(
                "qss limit {} Hz exceeds nadir limit {} Hz",
                self.qss_lim, self.nadir_lim
            )));
        }
        Ok(())
    }
}

/// One line of the feasible region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Rocof,
    Nadir,
    Qss,
    InertiaBox,
    DampingBox,
}

impl Constraint {
    pub fn as_str(&self) -> &'static str {
        match self {
            Constraint::Rocof => "rocof",
            Constraint::Nadir => "nadir",
            Constraint::Qss => "qss",
            Constraint::InertiaBox => "inertia_box",
            Constraint::DampingBox => "damping_box",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Constraint>,
    /// Nadir (Hz) used for the nadir line.
    pub nadir: f64,
    /// True when the nadir came from the ODE oracle instead of the closed form.
    pub nadir_from_ode: bool,
}

/// What fixed a required value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    Rocof,
    Nadir,
    Qss,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Requirement {
    pub h_re: f64,
    pub d_re: f64,
    pub h_binding: Binding,
    pub d_binding: Binding,
    /// Set when the nadir was not monotone in inertia over the search
    /// interval and a full scan replaced bisection.
    pub scanned: bool,
}

impl Requirement {
    pub fn vpp(&self) -> VppParams {
        VppParams::new(self.h_re, self.d_re)
    }
}

/// Nadir (Hz) from the closed form, falling back to the ODE trajectory
/// minimum where the closed form does not apply.
pub fn nadir_with_fallback(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<(f64, bool), RequirementError> {
    match freq_model::nadir(grid, vpp, dist) {
        Ok((n, _)) => Ok((n, false)),
        Err(FreqError::Overdamped { .. } | FreqError::NeverActivates { .. } | FreqError::NoExtremum) => {
            let horizon = (40.0 * grid.t_sg).max(60.0);
            let traj = ode_oracle::simulate(grid, vpp, dist, &SimConfig::with_horizon(horizon))?;
            Ok((traj.minimum().1.abs(), true))
        }
        Err(e) => Err(e.into()),
    }
}

/// Achieved metrics, using the ODE oracle for the nadir if needed.
pub fn achieved_metrics(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<FreqMetrics, RequirementError> {
    match freq_model::metrics(grid, vpp, dist) {
        Ok(m) => Ok(m),
        Err(FreqError::Param(e)) => Err(e.into()),
        Err(_) => {
            let horizon = (40.0 * grid.t_sg).max(60.0);
            let traj = ode_oracle::simulate(grid, vpp, dist, &SimConfig::with_horizon(horizon))?;
            let (t_nadir, v) = traj.minimum();
            let (t_db1, t_db2) = freq_model::deadband_crossing_times(grid, vpp, dist)
                .unwrap_or((f64::INFINITY, f64::INFINITY));
            Ok(FreqMetrics {
                rocof_max: freq_model::rocof_max(grid, vpp, dist),
                nadir: v.abs(),
                qss: freq_model::qss(grid, vpp, dist),
                t_nadir,
                t_db1,
                t_db2,
            })
        }
    }
}

pub fn in_feasible_region(
    grid: &GridParams,
    dist: &Disturbance,
    limits: &SecurityLimits,
    vpp: &VppParams,
) -> Result<FeasibilityReport, RequirementError> {
    limits.validate()?;
    let mut violations = Vec::new();
    let rocof = freq_model::rocof_max(grid, vpp, dist);
    if rocof > limits.rocof_lim + LIMIT_SLACK {
        violations.push(Constraint::Rocof);
    }
    let (nadir, nadir_from_ode) = nadir_with_fallback(grid, vpp, dist)?;
    if nadir > limits.nadir_lim + LIMIT_SLACK {
        violations.push(Constraint::Nadir);
    }
    if freq_model::qss(grid, vpp, dist) > limits.qss_lim + LIMIT_SLACK {
        violations.push(Constraint::Qss);
    }
    if vpp.h_vpp > limits.h_vpp_max {
        violations.push(Constraint::InertiaBox);
    }
    if vpp.d_vpp > limits.d_vpp_max {
        violations.push(Constraint::DampingBox);
    }
    Ok(FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
        nadir,
        nadir_from_ode,
    })
}

/// Smallest damping meeting the Qss limit, clamped at zero.
pub fn min_damping_for_qss(
    grid: &GridParams,
    dist: &Disturbance,
    limits: &SecurityLimits,
) -> Result<f64, RequirementError> {
    grid.validate()?;
    dist.validate()?;
    let qss_lim = grid.hz_to_pu(limits.qss_lim);
    let w1 = grid.f_db1_pu();
    if qss_lim <= w1 {
        return Err(RequirementError::DeadbandExceedsLimit {
            qss_lim_hz: limits.qss_lim,
            f_db1_hz: grid.f_db1,
        });
    }
    let num = dist.delta_p + grid.r * grid.f_db2_pu() - qss_lim * (grid.d0 + grid.r);
    Ok((num / (qss_lim - w1)).max(0.0))
}

/// Smallest inertia meeting the RoCoF limit, clamped at zero.
pub fn min_inertia_for_rocof(grid: &GridParams, dist: &Disturbance, limits: &SecurityLimits) -> f64 {
    let rocof_lim = grid.hz_to_pu(limits.rocof_lim);
    (dist.delta_p / (2.0 * rocof_lim) - grid.h0).max(0.0)
}

pub fn determine_requirement(
    grid: &GridParams,
    dist: &Disturbance,
    limits: &SecurityLimits,
) -> Result<Requirement, RequirementError> {
    limits.validate()?;
    let d_re = min_damping_for_qss(grid, dist, limits)?;
    if d_re > limits.d_vpp_max {
        return Err(RequirementError::Unsatisfiable(format!(
            "Qss needs D_vpp >= {d_re}, above the box bound {}",
            limits.d_vpp_max
        )));
    }
    let d_binding = if d_re > 0.0 { Binding::Qss } else { Binding::LowerBound };

    let h_lo = min_inertia_for_rocof(grid, dist, limits);
    if h_lo > limits.h_vpp_max {
        return Err(RequirementError::Unsatisfiable(format!(
            "RoCoF needs H_vpp >= {h_lo}, above the box bound {}",
            limits.h_vpp_max
        )));
    }
    let lower_binding = if h_lo > 0.0 { Binding::Rocof } else { Binding::LowerBound };
    let nadir_at = |h: f64| nadir_with_fallback(grid, &VppParams::new(h, d_re), dist).map(|(n, _)| n);
    let meets = |n: f64| n <= limits.nadir_lim;

    if meets(nadir_at(h_lo)?) {
        return Ok(Requirement {
            h_re: h_lo,
            d_re,
            h_binding: lower_binding,
            d_binding,
            scanned: false,
        });
    }
    let h_hi = limits.h_vpp_max;
    if !meets(nadir_at(h_hi)?) {
        return Err(RequirementError::Unsatisfiable(format!(
            "nadir limit {} Hz not met even at H_vpp = {h_hi} s",
            limits.nadir_lim
        )));
    }

    // Guard the bisection: nadir must not increase with inertia on [h_lo, h_hi].
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for i in 0..MONOTONE_PROBES {
        let h = h_lo + (h_hi - h_lo) * i as f64 / (MONOTONE_PROBES - 1) as f64;
        let n = nadir_at(h)?;
        if n > prev + 1e-12 {
            monotone = false;
            break;
        }
        prev = n;
    }

    let h_re = if monotone {
        let (mut lo, mut hi) = (h_lo, h_hi);
        while hi - lo > INERTIA_TOL {
            let mid = 0.5 * (lo + hi);
            if meets(nadir_at(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    } else {
        let steps = ((h_hi - h_lo) / SCAN_STEP).ceil() as usize;
        let mut found = h_hi;
        for i in 1..=steps {
            let h = (h_lo + i as f64 * SCAN_STEP).min(h_hi);
            if meets(nadir_at(h)?) {
                found = h;
                break;
            }
        }
        found
    };

    Ok(Requirement {
        h_re,
        d_re,
        h_binding: Binding::Nadir,
        d_binding,
        scanned: !monotone,
    })
}

/// One cell of a region sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCell {
    pub h_vpp: f64,
    pub d_vpp: f64,
    pub feasible: bool,
    pub violations: Vec<Constraint>,
}

/// Evaluate the feasible region on an `nh × nd` grid over the parameter box.
/// A resolution of 1 along an axis samples only its lower end (zero).
pub fn region_grid(
    grid: &GridParams,
    dist: &Disturbance,
    limits: &SecurityLimits,
    nh: usize,
    nd: usize,
    mode: ExecMode,
) -> Result<Vec<RegionCell>, RequirementError> {
    limits.validate()?;
    if nh == 0 || nd == 0 {
        return Err(ParamError::Invalid("region resolution must be at least 1x1".into()).into());
    }
    let axis = |n: usize, max: f64, i: usize| {
        if n == 1 {
            0.0
        } else {
            max * i as f64 / (n - 1) as f64
        }
    };
    let points: Vec<(f64, f64)> = (0..nh)
        .flat_map(|i| (0..nd).map(move |j| (i, j)))
        .map(|(i, j)| (axis(nh, limits.h_vpp_max, i), axis(nd, limits.d_vpp_max, j)))
        .collect();
    map_indexed(&points, mode, |_, &(h, d)| {
        let vpp = VppParams::new(h, d);
        in_feasible_region(grid, dist, limits, &vpp).map(|r| RegionCell {
            h_vpp: h,
            d_vpp: d,
            feasible: r.feasible,
            violations: r.violations,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::fixtures::*;
    use approx::assert_relative_eq;

    fn case_limits() -> SecurityLimits {
        SecurityLimits::new(0.4, 0.5, 0.35)
    }

    #[test]
    fn qss_damping_table1() {
        let d = min_damping_for_qss(&table1_grid(), &table1_dist(), &case_limits()).unwrap();
        // (0.25 + 25·0.00066 − 0.007·27) / (0.007 − 0.0006)
        assert_relative_eq!(d, 0.0775 / 0.0064, epsilon = 1e-12);
        assert!((d - 12.109).abs() < 1e-3);
    }

    #[test]
    fn qss_damping_clamps_and_errors() {
        let g = table1_grid();
        let dist = table1_dist();
        let inactive = 50.0 * (0.25 + 25.0 * 0.00066) / 27.0 + 1e-3;
        let mut lim = SecurityLimits::new(0.4, 1.0, inactive);
        assert_eq!(min_damping_for_qss(&g, &dist, &lim).unwrap(), 0.0);
        lim.qss_lim = g.f_db1;
        assert!(matches!(
            min_damping_for_qss(&g, &dist, &lim),
            Err(RequirementError::DeadbandExceedsLimit { .. })
        ));
    }

    #[test]
    fn rocof_inertia() {
        let g = table1_grid();
        let dist = table1_dist();
        assert_relative_eq!(min_inertia_for_rocof(&g, &dist, &case_limits()), 5.625, epsilon = 1e-12);
        let lim = SecurityLimits::new(1e6, 0.5, 0.35);
        assert_eq!(min_inertia_for_rocof(&g, &dist, &lim), 0.0);
        let mut g0 = g;
        g0.h0 = 0.0;
        assert_relative_eq!(min_inertia_for_rocof(&g0, &dist, &case_limits()), 0.25 / 0.016, epsilon = 1e-12);
    }

    #[test]
    fn feasibility_examples() {
        let g = table1_grid();
        let dist = table1_dist();
        let lim = case_limits();
        let r = in_feasible_region(&g, &dist, &lim, &required_vpp()).unwrap();
        assert!(r.feasible, "{:?}", r.violations);

        let r = in_feasible_region(&g, &dist, &lim, &VppParams::default()).unwrap();
        assert!(!r.feasible);
        assert!(r.violations.contains(&Constraint::Rocof));
        assert!(r.violations.contains(&Constraint::Qss));

        let r = in_feasible_region(&g, &dist, &lim, &VppParams::new(60.0, 12.2)).unwrap();
        assert_eq!(r.violations, vec![Constraint::InertiaBox]);
    }

    #[test]
    fn requirement_table1() {
        let req = determine_requirement(&table1_grid(), &table1_dist(), &case_limits()).unwrap();
        assert!((req.h_re - 19.125).abs() < 0.5, "{}", req.h_re);
        assert!((req.d_re - 12.109).abs() < 1e-3);
        assert_eq!(req.h_binding, Binding::Nadir);
        assert_eq!(req.d_binding, Binding::Qss);
        assert!(!req.scanned);
    }

    #[test]
    fn requirement_loose_limits() {
        let mut lim = SecurityLimits::new(1e3, 1e3, 1e3);
        lim.h_vpp_max = 50.0;
        let req = determine_requirement(&table1_grid(), &table1_dist(), &lim).unwrap();
        assert_eq!(req.h_re, 0.0);
        assert_eq!(req.d_re, 0.0);
        assert_eq!(req.h_binding, Binding::LowerBound);
        assert_eq!(req.d_binding, Binding::LowerBound);
    }

    #[test]
    fn requirement_unsatisfiable() {
        let g = table1_grid();
        let dist = table1_dist();
        let mut lim = case_limits();
        // Oracle: the best achievable nadir is at the top of the box.
        let d_re = min_damping_for_qss(&g, &dist, &lim).unwrap();
        let best = freq_model::nadir(&g, &VppParams::new(lim.h_vpp_max, d_re), &dist).unwrap().0;
        lim.nadir_lim = best - 0.01;
        lim.qss_lim = lim.qss_lim.min(lim.nadir_lim);
        assert!(matches!(
            determine_requirement(&g, &dist, &lim),
            Err(RequirementError::Unsatisfiable(_))
        ));
    }

    #[test]
    fn region_single_cell() {
        let cells = region_grid(&table1_grid(), &table1_dist(), &case_limits(), 1, 1, ExecMode::Sequential).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(!cells[0].feasible);
    }

    #[test]
    fn region_modes_agree() {
        let g = table1_grid();
        let dist = table1_dist();
        let a = region_grid(&g, &dist, &case_limits(), 6, 5, ExecMode::Sequential).unwrap();
        let b = region_grid(&g, &dist, &case_limits(), 6, 5, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
    }
}
