use thiserror::Error;

/// Invalid model parameters, rejected before any numerics run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{field} must be {expected}, got {value}")]
    OutOfRange {
        field: &'static str,
        expected: &'static str,
        value: f64,
    },
    #[error("VPP dead band ({f_db1} Hz) must be narrower than SG dead band ({f_db2} Hz)")]
    DeadbandOrder { f_db1: f64, f_db2: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// Which dead band a crossing refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Vpp,
    Sg,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreqError {
    #[error("system is not underdamped (zeta = {zeta}); closed form does not apply")]
    Overdamped { zeta: f64 },
    #[error("frequency never leaves the {band:?} dead band (asymptote {asymptote_pu} p.u. <= band {band_pu} p.u.)")]
    NeverActivates {
        band: Band,
        asymptote_pu: f64,
        band_pu: f64,
    },
    #[error("no admissible nadir found")]
    NoExtremum,
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("state became non-finite at t = {t} s")]
    NonFinite { t: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequirementError {
    #[error("quasi-steady-state limit {qss_lim_hz} Hz does not exceed VPP dead band {f_db1_hz} Hz")]
    DeadbandExceedsLimit { qss_lim_hz: f64, f_db1_hz: f64 },
    #[error("limits unsatisfiable within the parameter box: {0}")]
    Unsatisfiable(String),
    #[error(transparent)]
    Freq(#[from] FreqError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocError {
    #[error("allocation infeasible: {0}")]
    Infeasible(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("empty Pareto front")]
    EmptyFront,
    #[error("compensation prices (a, b) not provided")]
    MissingCompensation,
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Crate-level error for callers that chain several stages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Freq(#[from] FreqError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Requirement(#[from] RequirementError),
    #[error(transparent)]
    Alloc(#[from] AllocError),
}
