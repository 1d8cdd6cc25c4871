#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpp_ffr::{freq_model, Disturbance, GridParams, VppParams};

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

pub struct Case {
    pub grid: GridParams,
    pub vpp: VppParams,
    pub dist: Disturbance,
}

/// Scenarios with every parameter drawn within ±50% of the case-study values
/// (VPP pair around the required point), kept only if underdamped and
/// activating.
pub fn random_cases(n: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let base = table1_grid();
    while out.len() < n {
        let mut j = |x: f64| x * rng.gen_range(0.5..1.5);
        let f_db1 = j(base.f_db1);
        let f_db2 = j(base.f_db2);
        let grid = GridParams {
            d0: j(base.d0),
            h0: j(base.h0),
            r: j(base.r),
            t_sg: j(base.t_sg),
            f0: base.f0,
            f_db1: f_db1.min(f_db2),
            f_db2: f_db1.max(f_db2),
        };
        let vpp = VppParams::new(j(19.125), j(12.109));
        let dist = Disturbance { delta_p: j(0.25) };
        if grid.validate().is_err() {
            continue;
        }
        if freq_model::ClosedForm::new(&grid, &vpp, &dist).is_ok() {
            out.push(Case { grid, vpp, dist });
        }
    }
    out
}
