use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// Aggregated grid and synchronous-generator constants.
///
/// Power-like quantities (`d0`, `r`) are per-unit on the system base.
/// Dead bands are in Hz and converted to per-unit frequency through `f0`
/// wherever they enter the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Load damping (p.u. power / p.u. frequency).
    pub d0: f64,
    /// Aggregated SG inertia constant (s).
    pub h0: f64,
    /// Aggregated SG droop gain (p.u. power / p.u. frequency).
    pub r: f64,
    /// SG governor/turbine time constant (s).
    pub t_sg: f64,
    /// Nominal frequency (Hz).
    pub f0: f64,
    /// VPP dead band (Hz).
    pub f_db1: f64,
    /// SG dead band (Hz).
    pub f_db2: f64,
}

impl GridParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("d0", self.d0)?;
        positive("h0", self.h0)?;
        positive("r", self.r)?;
        positive("t_sg", self.t_sg)?;
        positive("f0", self.f0)?;
        non_negative("f_db1", self.f_db1)?;
        non_negative("f_db2", self.f_db2)?;
        // Equal zero-width bands are allowed so dead-band-free runs are expressible.
        if self.f_db1 > self.f_db2 || (self.f_db1 == self.f_db2 && self.f_db1 > 0.0) {
            return Err(ParamError::DeadbandOrder {
                f_db1: self.f_db1,
                f_db2: self.f_db2,
            });
        }
        Ok(())
    }

    pub fn f_db1_pu(&self) -> f64 {
        self.f_db1 / self.f0
    }

    pub fn f_db2_pu(&self) -> f64 {
        self.f_db2 / self.f0
    }

    pub fn hz_to_pu(&self, hz: f64) -> f64 {
        hz / self.f0
    }

    pub fn pu_to_hz(&self, pu: f64) -> f64 {
        pu * self.f0
    }
}

/// Step power deficit. Only frequency-drop events are modelled, so the
/// magnitude is strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disturbance {
    pub delta_p: f64,
}

impl Disturbance {
    pub fn new(delta_p: f64) -> Result<Self, ParamError> {
        let d = Disturbance { delta_p };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.delta_p.is_finite() && self.delta_p > 0.0) {
            return Err(ParamError::OutOfRange {
                field: "delta_p",
                expected: "a positive deficit (frequency-drop events only)",
                value: self.delta_p,
            });
        }
        Ok(())
    }
}

/// Aggregated VPP virtual inertia (s) and virtual damping (p.u./p.u.).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VppParams {
    pub h_vpp: f64,
    pub d_vpp: f64,
}

impl VppParams {
    pub fn new(h_vpp: f64, d_vpp: f64) -> Self {
        VppParams { h_vpp, d_vpp }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        non_negative("h_vpp", self.h_vpp)?;
        non_negative("d_vpp", self.d_vpp)
    }
}

pub(crate) fn positive(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            field,
            expected: "finite and > 0",
            value,
        })
    }
}

pub(crate) fn non_negative(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            field,
            expected: "finite and >= 0",
            value,
        })
    }
}

pub(crate) fn validate_all(
    grid: &GridParams,
    vpp: &VppParams,
    dist: &Disturbance,
) -> Result<(), ParamError> {
    grid.validate()?;
    vpp.validate()?;
    dist.validate()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn table1_grid() -> GridParams {
        GridParams {
            d0: 2.0,
            h0: 10.0,
            r: 25.0,
            t_sg: 5.0,
            f0: 50.0,
            f_db1: 0.03,
            f_db2: 0.033,
        }
    }

    pub fn table1_dist() -> Disturbance {
        Disturbance { delta_p: 0.25 }
    }

    pub fn required_vpp() -> VppParams {
        VppParams::new(19.125, 12.109)
    }
}
