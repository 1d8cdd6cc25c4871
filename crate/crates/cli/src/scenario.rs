//! Scenario documents. Every numeric field carries its unit in the name.

use serde::{Deserialize, Serialize};
use vpp_ffr::allocator::{Compensation, FrontOptions, IbrSpec, Normalization};
use vpp_ffr::ode_oracle::SimConfig;
use vpp_ffr::requirements::{SecurityLimits, DEFAULT_D_VPP_MAX, DEFAULT_H_VPP_MAX};
use vpp_ffr::{Disturbance, GridParams, ParamError, VppParams};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub grid: GridSection,
    pub disturbance: DisturbanceSection,
    pub limits: LimitsSection,
    #[serde(default)]
    pub ibrs: Vec<IbrSection>,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub sim: SimSection,
    /// Fixed VPP parameters for `simulate`; the requirement is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vpp: Option<VppSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compensation: Option<CompensationSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub d0_pu: f64,
    pub h0_s: f64,
    pub r_pu: f64,
    pub t_sg_s: f64,
    pub f0_hz: f64,
    pub f_db1_hz: f64,
    pub f_db2_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceSection {
    pub delta_p_pu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSection {
    pub rocof_hz_per_s: f64,
    pub nadir_hz: f64,
    pub qss_hz: f64,
    #[serde(default = "default_h_max")]
    pub h_vpp_max_s: f64,
    #[serde(default = "default_d_max")]
    pub d_vpp_max_pu: f64,
}

fn default_h_max() -> f64 {
    DEFAULT_H_VPP_MAX
}

fn default_d_max() -> f64 {
    DEFAULT_D_VPP_MAX
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IbrSection {
    pub alpha_per_s: f64,
    pub beta_per_pu: f64,
    pub p_rated_pu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_available_pu: Option<f64>,
    pub h_min_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_max_s: Option<f64>,
    pub d_min_pu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max_pu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    #[default]
    Raw,
    IdealWorst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub normalize: NormalizeMode,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            n_samples: 200,
            seed: 42,
            normalize: NormalizeMode::Raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub dt_s: f64,
    pub t_end_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_vpp_s: Option<f64>,
}

impl Default for SimSection {
    fn default() -> Self {
        let c = SimConfig::default();
        SimSection {
            dt_s: c.dt,
            t_end_s: c.t_end,
            t_vpp_s: c.t_vpp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VppSection {
    pub h_vpp_s: f64,
    pub d_vpp_pu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompensationSection {
    pub a_per_s: f64,
    pub b_per_pu: f64,
}

/// Scenario converted to library types and checked.
#[derive(Debug, Clone)]
pub struct Model {
    pub grid: GridParams,
    pub dist: Disturbance,
    pub limits: SecurityLimits,
    pub ibrs: Vec<IbrSpec>,
    pub front: FrontOptions,
    pub sim: SimConfig,
    pub vpp: Option<VppParams>,
    pub compensation: Option<Compensation>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::validation(format!("scenario: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn model(&self) -> Result<Model, CliError> {
        let g = &self.grid;
        let grid = GridParams {
            d0: g.d0_pu,
            h0: g.h0_s,
            r: g.r_pu,
            t_sg: g.t_sg_s,
            f0: g.f0_hz,
            f_db1: g.f_db1_hz,
            f_db2: g.f_db2_hz,
        };
        grid.validate()?;
        let dist = Disturbance {
            delta_p: self.disturbance.delta_p_pu,
        };
        dist.validate()?;
        let l = &self.limits;
        let limits = SecurityLimits {
            rocof_lim: l.rocof_hz_per_s,
            nadir_lim: l.nadir_hz,
            qss_lim: l.qss_hz,
            h_vpp_max: l.h_vpp_max_s,
            d_vpp_max: l.d_vpp_max_pu,
        };
        limits.validate()?;
        let ibrs = self
            .ibrs
            .iter()
            .map(|i| IbrSpec {
                alpha: i.alpha_per_s,
                beta: i.beta_per_pu,
                p_rated: i.p_rated_pu,
                p_available: i.p_available_pu,
                h_min: i.h_min_s,
                h_max: i.h_max_s,
                d_min: i.d_min_pu,
                d_max: i.d_max_pu,
            })
            .collect();
        if self.sampling.n_samples == 0 {
            return Err(CliError::validation("sampling.n_samples must be at least 1"));
        }
        let mut front = FrontOptions::new(self.sampling.n_samples, self.sampling.seed);
        front.normalization = match self.sampling.normalize {
            NormalizeMode::Raw => Normalization::Raw,
            NormalizeMode::IdealWorst => Normalization::IdealWorst,
        };
        let sim = SimConfig {
            dt: self.sim.dt_s,
            t_end: self.sim.t_end_s,
            t_vpp: self.sim.t_vpp_s,
        };
        sim.validate()?;
        let vpp = self.vpp.map(|v| VppParams::new(v.h_vpp_s, v.d_vpp_pu));
        if let Some(v) = &vpp {
            v.validate()?;
        }
        let compensation = self.compensation.map(|c| Compensation {
            a: c.a_per_s,
            b: c.b_per_pu,
        });
        if let Some(c) = &compensation {
            if !(c.a.is_finite() && c.b.is_finite()) {
                return Err(ParamError::Invalid("compensation prices must be finite".into()).into());
            }
        }
        Ok(Model {
            grid,
            dist,
            limits,
            ibrs,
            front,
            sim,
            vpp,
            compensation,
        })
    }

    /// The eight-resource case study system.
    pub fn table1() -> Self {
        const ALPHA: [f64; 8] = [3.0, 4.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0];
        const BETA: [f64; 8] = [2.0, 3.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1.0];
        const P_RATED: [f64; 8] = [0.13, 0.1, 0.04, 0.05, 0.05, 0.1, 0.02, 0.01];
        Scenario {
            grid: GridSection {
                d0_pu: 2.0,
                h0_s: 10.0,
                r_pu: 25.0,
                t_sg_s: 5.0,
                f0_hz: 50.0,
                f_db1_hz: 0.03,
                f_db2_hz: 0.033,
            },
            disturbance: DisturbanceSection { delta_p_pu: 0.25 },
            limits: LimitsSection {
                rocof_hz_per_s: 0.4,
                nadir_hz: 0.5,
                qss_hz: 0.35,
                h_vpp_max_s: DEFAULT_H_VPP_MAX,
                d_vpp_max_pu: DEFAULT_D_VPP_MAX,
            },
            ibrs: (0..8)
                .map(|k| IbrSection {
                    alpha_per_s: ALPHA[k],
                    beta_per_pu: BETA[k],
                    p_rated_pu: P_RATED[k],
                    p_available_pu: None,
                    h_min_s: 0.1,
                    h_max_s: None,
                    d_min_pu: 0.1,
                    d_max_pu: None,
                })
                .collect(),
            sampling: SamplingSection::default(),
            sim: SimSection::default(),
            vpp: None,
            compensation: None,
        }
    }
}
