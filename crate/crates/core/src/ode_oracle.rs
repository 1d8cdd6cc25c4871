//! Time-domain integration of the aggregated frequency dynamics.
//!
//! State is the frequency deviation `x` (p.u.), the SG power `p_sg` (p.u.)
//! and, when a VPP lag is configured, the lagged VPP damping power:
//!
//! ```text
//!   2·H·dx/dt      = −ΔP − D0·x − D_vpp·db(x, w1) + p_sg        (no VPP lag)
//!   T_sg·dp_sg/dt  = −p_sg − R·db(x, w2)
//! ```
//!
//! `H = H0 + H_vpp`. `db` is a continuous piecewise-linear dead band, so the
//! fixed-step RK4 integrator needs no event handling.

use serde::Serialize;

use crate::error::{ParamError, SimError};
use crate::params::{non_negative, positive, validate_all, Disturbance, GridParams, VppParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SimConfig {
    /// Step size (s).
    pub dt: f64,
    /// Horizon (s).
    pub t_end: f64,
    /// Optional first-order lag on the VPP damping response (s).
    pub t_vpp: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            t_end: 60.0,
            t_vpp: None,
        }
    }
}

impl SimConfig {
    pub fn with_horizon(t_end: f64) -> Self {
        SimConfig {
            t_end,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        positive("dt", self.dt)?;
        non_negative("t_end", self.t_end)?;
        if let Some(t) = self.t_vpp {
            positive("t_vpp", t)?;
        }
        if self.t_end / self.dt > 1e8 {
            return Err(ParamError::Invalid(format!(
                "{} steps requested; reduce t_end or increase dt",
                self.t_end / self.dt
            )));
        }
        Ok(())
    }
}

/// Sampled trajectory. Frequencies in Hz, powers in p.u.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub delta_f: Vec<f64>,
    pub p_sg: Vec<f64>,
    pub p_vpp: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Time and value (Hz, signed) of the lowest frequency deviation.
    pub fn minimum(&self) -> (f64, f64) {
        let (i, v) = self
            .delta_f
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        (self.times[i], v)
    }

    pub fn peak_abs(&self) -> f64 {
        self.delta_f.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.delta_f.last()?))
    }
}

/// Dead band applied to a deviation: zero inside `[-w, w]`, shifted linear outside.
pub fn deadband(x: f64, w: f64) -> f64 {
    if x < -w {
        x + w
    } else if x > w {
        x - w
    } else {
        0.0
    }
}

struct Dynamics {
    two_h: f64,
    d0: f64,
    r: f64,
    t_sg: f64,
    d_vpp: f64,
    h_vpp: f64,
    w1: f64,
    w2: f64,
    delta_p: f64,
    t_vpp: Option<f64>,
}

type State = [f64; 3];

impl Dynamics {
    // state = [x, p_sg, q_vpp]; q_vpp is only integrated when a VPP lag is set.
    fn vpp_damping_power(&self, s: &State) -> f64 {
        match self.t_vpp {
            Some(_) => s[2],
            None => -self.d_vpp * deadband(s[0], self.w1),
        }
    }

    fn rhs(&self, s: &State) -> State {
        let x = s[0];
        let p_vpp = self.vpp_damping_power(s);
        let dx = (-self.delta_p - self.d0 * x + p_vpp + s[1]) / self.two_h;
        let dp = (-s[1] - self.r * deadband(x, self.w2)) / self.t_sg;
        let dq = match self.t_vpp {
            Some(t) => (-s[2] - self.d_vpp * deadband(x, self.w1)) / t,
            None => 0.0,
        };
        [dx, dp, dq]
    }

    fn rk4(&self, s: &State, dt: f64) -> State {
        let add = |a: &State, k: &State, h: f64| [a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]];
        let k1 = self.rhs(s);
        let k2 = self.rhs(&add(s, &k1, 0.5 * dt));
        let k3 = self.rhs(&add(s, &k2, 0.5 * dt));
        let k4 = self.rhs(&add(s, &k3, dt));
        let mut out = *s;
        for i in 0..3 {
            out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }
}

pub fn simulate(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
    cfg: &SimConfig,
) -> Result<Trajectory, SimError> {
    validate_all(grid, vpp, dist)?;
    cfg.validate()?;
    let dyns = Dynamics {
        two_h: 2.0 * (grid.h0 + vpp.h_vpp),
        d0: grid.d0,
        r: grid.r,
        t_sg: grid.t_sg,
        d_vpp: vpp.d_vpp,
        h_vpp: vpp.h_vpp,
        w1: grid.f_db1_pu(),
        w2: grid.f_db2_pu(),
        delta_p: dist.delta_p,
        t_vpp: cfg.t_vpp,
    };
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        delta_f: Vec::with_capacity(steps + 1),
        p_sg: Vec::with_capacity(steps + 1),
        p_vpp: Vec::with_capacity(steps + 1),
    };
    let f0 = grid.f0;
    let mut record = |t: f64, s: &State| {
        let dx = dyns.rhs(s)[0];
        traj.times.push(t);
        traj.delta_f.push(s[0] * f0);
        traj.p_sg.push(s[1]);
        traj.p_vpp.push(dyns.vpp_damping_power(s) - dyns.h_vpp * 2.0 * dx);
    };

    let mut state: State = [0.0; 3];
    record(0.0, &state);
    for i in 1..=steps {
        state = dyns.rk4(&state, cfg.dt);
        let t = i as f64 * cfg.dt;
        if !state.iter().all(|v| v.is_finite()) {
            return Err(SimError::NonFinite { t });
        }
        record(t, &state);
    }
    Ok(traj)
}
