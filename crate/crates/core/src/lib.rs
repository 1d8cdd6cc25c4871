//! Frequency-regulation requirements for a virtual power plant (VPP) and
//! their allocation across inverter-based resources (IBRs).
//!
//! The crate is organised bottom-up:
//!
//! - [`freq_model`]: closed-form piecewise frequency response of the
//!   aggregated grid after a step power deficit, plus the RoCoF, nadir and
//!   quasi-steady-state security metrics.
//! - [`ode_oracle`]: fixed-step RK4 integration of the underlying swing /
//!   droop / dead-band dynamics, used as an independent check on the
//!   closed form and as a fallback where the closed form does not apply.
//! - [`requirements`]: the feasible (H, D) region and the minimal required
//!   virtual inertia and damping.
//! - [`allocator`]: Pareto-front generation by weighted-sum scalarization
//!   and Nash-bargaining selection of an allocation across IBRs.
//!
//! Batch work (weight sweeps, region sweeps, randomized oracle checks) runs
//! on rayon when the `parallel` feature is enabled and falls back to a
//! plain sequential loop otherwise; see [`ExecMode`].

pub mod allocator;
mod error;
mod exec;
pub mod freq_model;
pub mod ode_oracle;
mod params;
pub mod requirements;

pub use error::{AllocError, Band, Error, FreqError, ParamError, RequirementError, SimError};
pub use exec::{map_indexed, ExecMode};
pub use params::{Disturbance, GridParams, VppParams};
