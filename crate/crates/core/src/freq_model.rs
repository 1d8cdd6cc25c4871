//! Closed-form frequency response after a step power deficit.
//!
//! The response is piecewise. Before the VPP dead band is crossed only the
//! combined inertia and load damping act, giving a first-order exponential
//! decay toward `-ΔP/D0`. Once both primary responses are active the system
//! is the second-order step response of
//!
//! ```text
//!   Δf(s)/ΔP(s) = (1 + s·T_sg) / ((2H·s + D)(1 + s·T_sg) + R)
//! ```
//!
//! with `H = H0 + H_vpp`, `D = D0 + D_vpp`, plus constant offsets contributed
//! by the two dead bands. The short interval between the two dead-band
//! crossings is covered by extending the pre-activation branch, which makes
//! the response continuous at the SG crossing.
//!
//! All internal frequencies are per-unit; public functions return Hz.

use serde::Serialize;

use crate::error::{Band, FreqError};
use crate::params::{validate_all, Disturbance, GridParams, VppParams};

/// Coefficients of the underdamped second-order response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondOrderCoeffs {
    /// Natural frequency (rad/s).
    pub omega_n: f64,
    pub zeta: f64,
    /// Damped frequency (rad/s).
    pub omega_d: f64,
    pub eta1: f64,
    /// Phase of the disturbance-driven term (rad).
    pub phi1: f64,
    pub eta2: f64,
    /// Phase of the SG dead-band term (rad).
    pub phi2: f64,
    pub h_total: f64,
    pub d_total: f64,
    /// Relative weight of the SG dead-band term in the nadir condition.
    pub m: f64,
}

/// Achieved security metrics, all as magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreqMetrics {
    /// Largest |dΔf/dt| (Hz/s).
    pub rocof_max: f64,
    /// Largest |Δf| (Hz).
    pub nadir: f64,
    /// |Δf| once transients settle (Hz).
    pub qss: f64,
    /// Time of the nadir measured from the disturbance (s).
    pub t_nadir: f64,
    pub t_db1: f64,
    pub t_db2: f64,
}

pub fn derive_coeffs(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<SecondOrderCoeffs, FreqError> {
    validate_all(grid, vpp, dist)?;
    let h = grid.h0 + vpp.h_vpp;
    let d = grid.d0 + vpp.d_vpp;
    let t = grid.t_sg;
    let r = grid.r;

    let omega_n = ((d + r) / (2.0 * h * t)).sqrt();
    let zeta = (2.0 * h + d * t) / (2.0 * (2.0 * t * h * (r + d)).sqrt());
    if zeta >= 1.0 {
        return Err(FreqError::Overdamped { zeta });
    }
    let root = (1.0 - zeta * zeta).sqrt();
    let omega_d = omega_n * root;
    let eta1 = ((1.0 - 2.0 * t * omega_n * zeta + t * t * omega_n * omega_n) / (1.0 - zeta * zeta))
        .sqrt();
    // tan(phi1) = omega_d / (zeta·omega_n − T·omega_n²). The quadrant is fixed by
    // requiring the response to start from zero, i.e. eta1·sin(phi1) = −1.
    let phi1 = (-omega_d).atan2(t * omega_n * omega_n - zeta * omega_n);
    let eta2 = 1.0 / root;
    let phi2 = (root / zeta).atan();
    let m = r * grid.f_db2_pu() / (dist.delta_p + vpp.d_vpp * grid.f_db1_pu()) * eta2 / eta1;

    Ok(SecondOrderCoeffs {
        omega_n,
        zeta,
        omega_d,
        eta1,
        phi1,
        eta2,
        phi2,
        h_total: h,
        d_total: d,
        m,
    })
}

fn crossing_time(h_total: f64, d0: f64, delta_p: f64, band_pu: f64, band: Band) -> Result<f64, FreqError> {
    let asymptote_pu = delta_p / d0;
    if asymptote_pu <= band_pu {
        return Err(FreqError::NeverActivates {
            band,
            asymptote_pu,
            band_pu,
        });
    }
    Ok(-(2.0 * h_total / d0) * (1.0 - band_pu * d0 / delta_p).ln())
}

/// Times at which the pre-activation response reaches the VPP and SG dead
/// bands.
pub fn deadband_crossing_times(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<(f64, f64), FreqError> {
    validate_all(grid, vpp, dist)?;
    let h = grid.h0 + vpp.h_vpp;
    let t1 = crossing_time(h, grid.d0, dist.delta_p, grid.f_db1_pu(), Band::Vpp)?;
    let t2 = crossing_time(h, grid.d0, dist.delta_p, grid.f_db2_pu(), Band::Sg)?;
    Ok((t1, t2))
}

/// A fully evaluated closed-form model for one (grid, VPP, disturbance)
/// triple. Cheap to copy; build once and evaluate many times.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    pub coeffs: SecondOrderCoeffs,
    pub t_db1: f64,
    pub t_db2: f64,
    f0: f64,
    delta_p: f64,
    d0: f64,
    // Amplitudes (p.u.) of the disturbance term and the SG dead-band term.
    amp_dist: f64,
    amp_db: f64,
}

impl ClosedForm {
    pub fn new(grid: &GridParams, vpp: &VppParams, dist: &Disturbance) -> Result<Self, FreqError> {
        let coeffs = derive_coeffs(grid, vpp, dist)?;
        let (t_db1, t_db2) = deadband_crossing_times(grid, vpp, dist)?;
        let denom = vpp.d_vpp + grid.d0 + grid.r;
        Ok(ClosedForm {
            coeffs,
            t_db1,
            t_db2,
            f0: grid.f0,
            delta_p: dist.delta_p,
            d0: grid.d0,
            amp_dist: (dist.delta_p + vpp.d_vpp * grid.f_db1_pu()) / denom,
            amp_db: grid.r * grid.f_db2_pu() / denom,
        })
    }

    /// Pre-activation branch (p.u.).
    pub fn first_branch_pu(&self, t: f64) -> f64 {
        let h = self.coeffs.h_total;
        -self.delta_p / self.d0 * (1.0 - (-self.d0 / (2.0 * h) * t).exp())
    }

    /// Post-activation branch (p.u.), `t` measured from the disturbance.
    pub fn second_branch_pu(&self, t: f64) -> f64 {
        let c = &self.coeffs;
        let decay = (-c.zeta * c.omega_n * t).exp();
        let g1 = decay * (c.omega_d * t + c.phi1).sin();
        let g2 = decay * (c.omega_d * t + c.phi2).sin();
        -self.amp_dist * (1.0 + c.eta1 * g1) - self.amp_db * (1.0 - c.eta2 * g2)
    }

    /// First and second time derivatives of the post-activation branch (p.u./s, p.u./s²).
    pub fn second_branch_derivatives_pu(&self, t: f64) -> (f64, f64) {
        let c = &self.coeffs;
        let sigma = c.zeta * c.omega_n;
        let wd = c.omega_d;
        let decay = (-sigma * t).exp();
        let d1 = |phi: f64| {
            let (s, co) = (wd * t + phi).sin_cos();
            decay * (wd * co - sigma * s)
        };
        let d2 = |phi: f64| {
            let (s, co) = (wd * t + phi).sin_cos();
            decay * ((sigma * sigma - wd * wd) * s - 2.0 * sigma * wd * co)
        };
        let first = -self.amp_dist * c.eta1 * d1(c.phi1) + self.amp_db * c.eta2 * d1(c.phi2);
        let second = -self.amp_dist * c.eta1 * d2(c.phi1) + self.amp_db * c.eta2 * d2(c.phi2);
        (first, second)
    }

    /// Piecewise response (p.u.): pre-activation branch up to the SG crossing,
    /// post-activation branch after it.
    pub fn response_pu(&self, t: f64) -> f64 {
        if t < self.t_db2 {
            self.first_branch_pu(t)
        } else {
            self.second_branch_pu(t)
        }
    }

    pub fn response_hz(&self, t: f64) -> f64 {
        self.response_pu(t) * self.f0
    }

    /// Nadir time (s, from the disturbance) and signed nadir value (p.u.).
    ///
    /// Candidates are the stationary points of the post-activation branch,
    /// spaced π/ω_d apart. The first one after the SG crossing where the
    /// branch has positive curvature (a minimum of a drop) is taken.
    pub fn nadir_pu(&self) -> Result<(f64, f64), FreqError> {
        let c = &self.coeffs;
        let sigma = c.zeta * c.omega_n;
        let wd = c.omega_d;
        let (s1, c1) = c.phi1.sin_cos();
        let (s2, c2) = c.phi2.sin_cos();
        let cos_mix = c.m * c2 - c1;
        let sin_mix = c.m * s2 - s1;
        let num = wd * cos_mix - sigma * sin_mix;
        let den = sigma * cos_mix + wd * sin_mix;
        let theta = if den == 0.0 {
            std::f64::consts::FRAC_PI_2.copysign(num)
        } else {
            (num / den).atan()
        };
        let base = theta / wd;
        let period = std::f64::consts::PI / wd;
        for k in 0..64 {
            let t = base + k as f64 * period;
            if t <= self.t_db2 {
                continue;
            }
            let (_, curvature) = self.second_branch_derivatives_pu(t);
            if curvature > 0.0 {
                return Ok((t, self.second_branch_pu(t)));
            }
        }
        Err(FreqError::NoExtremum)
    }
}

/// Δf(t) in Hz (negative for a drop).
pub fn freq_response(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
    t: f64,
) -> Result<f64, FreqError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(crate::ParamError::OutOfRange {
            field: "t",
            expected: "finite and >= 0",
            value: t,
        }
        .into());
    }
    Ok(ClosedForm::new(grid, vpp, dist)?.response_hz(t))
}

/// Initial rate of change of frequency (Hz/s), as a magnitude.
pub fn rocof_max(grid: &GridParams, vpp: &VppParams, dist: &Disturbance) -> f64 {
    grid.f0 * dist.delta_p / (2.0 * (grid.h0 + vpp.h_vpp))
}

/// Nadir magnitude (Hz) and its time (s, from the disturbance).
pub fn nadir(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<(f64, f64), FreqError> {
    let cf = ClosedForm::new(grid, vpp, dist)?;
    let (t, value) = cf.nadir_pu()?;
    Ok((value.abs() * grid.f0, t))
}

/// Quasi-steady-state deviation magnitude (Hz).
pub fn qss(grid: &GridParams, vpp: &VppParams, dist: &Disturbance) -> f64 {
    let num = dist.delta_p + vpp.d_vpp * grid.f_db1_pu() + grid.r * grid.f_db2_pu();
    grid.f0 * num / (vpp.d_vpp + grid.d0 + grid.r)
}

pub fn metrics(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<FreqMetrics, FreqError> {
    let cf = ClosedForm::new(grid, vpp, dist)?;
    let (t_nadir, nadir_pu) = cf.nadir_pu()?;
    Ok(FreqMetrics {
        rocof_max: rocof_max(grid, vpp, dist),
        nadir: nadir_pu.abs() * grid.f0,
        qss: qss(grid, vpp, dist),
        t_nadir,
        t_db1: cf.t_db1,
        t_db2: cf.t_db2,
    })
}
