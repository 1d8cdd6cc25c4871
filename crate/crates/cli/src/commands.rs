use serde_json::{json, Value};
use vpp_ffr::allocator::{compare_single_objective, pareto_front_with, AllocationProblem, ParetoPoint};
use vpp_ffr::freq_model::ClosedForm;
use vpp_ffr::ode_oracle::simulate;
use vpp_ffr::requirements::{
    achieved_metrics, determine_requirement, in_feasible_region, region_grid, Constraint, Requirement,
};
use vpp_ffr::{ExecMode, VppParams};

use crate::error::CliError;
use crate::output::{render_json, to_value, Cell, Format, Table};
use crate::scenario::{Model, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Which {
    ClosedForm,
    Ode,
    #[default]
    Both,
}

fn requirement(m: &Model) -> Result<Requirement, CliError> {
    Ok(determine_requirement(&m.grid, &m.dist, &m.limits)?)
}

fn problem(m: &Model, req: &Requirement) -> Result<AllocationProblem, CliError> {
    Ok(AllocationProblem::new(
        m.ibrs.clone(),
        req.h_re,
        req.d_re,
        m.dist.delta_p,
        m.compensation,
    )?)
}

/// Time series of the frequency deviation for the scenario's VPP
/// parameters, or the requirement when none are given. Every `stride`-th
/// step is written, plus the final one.
pub fn cmd_simulate(scenario: &Scenario, which: Which, stride: usize, format: Format) -> Result<String, CliError> {
    if stride == 0 {
        return Err(CliError::validation("stride must be at least 1"));
    }
    let m = scenario.model()?;
    let vpp = match m.vpp {
        Some(v) => v,
        None => requirement(&m)?.vpp(),
    };
    let steps = (m.sim.t_end / m.sim.dt).round() as usize;
    let keep = |i: usize| i.is_multiple_of(stride) || i == steps;
    let closed = match which {
        Which::Ode => None,
        _ => Some(ClosedForm::new(&m.grid, &vpp, &m.dist)?),
    };
    let ode = match which {
        Which::ClosedForm => None,
        _ => Some(simulate(&m.grid, &vpp, &m.dist, &m.sim)?),
    };

    let header: &[&str] = match which {
        Which::ClosedForm => &["t", "delta_f_hz"],
        Which::Ode => &["t", "delta_f_hz", "p_sg_pu", "p_vpp_pu"],
        Which::Both => &["t", "delta_f_closed_form_hz", "delta_f_ode_hz", "p_sg_pu", "p_vpp_pu"],
    };
    let mut table = Table::new(header.iter().copied());
    for i in (0..=steps).filter(|&i| keep(i)) {
        let t = match &ode {
            Some(tr) => tr.times[i],
            None => i as f64 * m.sim.dt,
        };
        let mut row = vec![Cell::Num(t)];
        if let Some(cf) = &closed {
            row.push(Cell::Num(cf.response_hz(t)));
        }
        if let Some(tr) = &ode {
            row.extend([Cell::Num(tr.delta_f[i]), Cell::Num(tr.p_sg[i]), Cell::Num(tr.p_vpp[i])]);
        }
        table.push(row);
    }
    table.render(format)
}

/// Minimum VPP inertia and damping, with the metrics they achieve.
pub fn cmd_requirements(scenario: &Scenario, format: Format) -> Result<String, CliError> {
    let m = scenario.model()?;
    let req = requirement(&m)?;
    let vpp = req.vpp();
    let metrics = achieved_metrics(&m.grid, &vpp, &m.dist)?;
    let report = in_feasible_region(&m.grid, &m.dist, &m.limits, &vpp)?;
    match format {
        Format::Json => Ok(render_json(json!({
            "requirement": to_value(&req),
            "metrics": to_value(&metrics),
            "nadir_from_ode": report.nadir_from_ode,
            "feasible": report.feasible,
        }))),
        Format::Csv => {
            let mut t = Table::new(["quantity", "value"]);
            let rows = [
                ("h_re_s", req.h_re),
                ("d_re_pu", req.d_re),
                ("rocof_max_hz_per_s", metrics.rocof_max),
                ("nadir_hz", metrics.nadir),
                ("qss_hz", metrics.qss),
                ("t_nadir_s", metrics.t_nadir),
                ("t_db1_s", metrics.t_db1),
                ("t_db2_s", metrics.t_db2),
            ];
            for (k, v) in rows {
                t.push(vec![Cell::Text(k.into()), Cell::Num(v)]);
            }
            t.to_csv()
        }
    }
}

fn front_table(n: usize, front: &[ParetoPoint]) -> Table {
    let mut t = Table::new(std::iter::once("f_vpp".to_string()).chain((1..=n).map(|k| format!("f_ibr_{k}"))));
    for p in front {
        t.push(p.objectives.to_vec().into_iter().map(Cell::Num).collect());
    }
    t
}

/// Requirement, Pareto front, Nash bargaining choice and its comparison
/// with the cost-only allocation.
pub fn cmd_allocate(scenario: &Scenario, format: Format) -> Result<String, CliError> {
    let m = scenario.model()?;
    let req = requirement(&m)?;
    let p = problem(&m, &req)?;
    let cmp = compare_single_objective(&p, &m.front)?;
    match format {
        Format::Json => {
            let mut out = json!({ "requirement": to_value(&req) });
            if let (Value::Object(o), Value::Object(c)) = (&mut out, to_value(&cmp)) {
                o.extend(c);
            }
            Ok(render_json(out))
        }
        Format::Csv => front_table(p.n(), &cmp.bargain.front).to_csv(),
    }
}

pub fn cmd_pareto(scenario: &Scenario, format: Format) -> Result<String, CliError> {
    let m = scenario.model()?;
    let req = requirement(&m)?;
    let p = problem(&m, &req)?;
    let front = pareto_front_with(&p, &m.front)?;
    match format {
        Format::Json => Ok(render_json(json!({
            "requirement": to_value(&req),
            "front": to_value(&front),
        }))),
        Format::Csv => front_table(p.n(), &front).to_csv(),
    }
}

fn join(v: &[Constraint]) -> String {
    v.iter().map(Constraint::as_str).collect::<Vec<_>>().join(";")
}

/// Feasibility over an `nh × nd` grid of the parameter box. With
/// `include_required` the requirement point is appended as a final row.
pub fn cmd_region(
    scenario: &Scenario,
    nh: usize,
    nd: usize,
    include_required: bool,
    format: Format,
) -> Result<String, CliError> {
    let m = scenario.model()?;
    let cells = region_grid(&m.grid, &m.dist, &m.limits, nh, nd, ExecMode::default())?;
    let mut t = Table::new(["h_vpp", "d_vpp", "feasible", "violations"]);
    for c in &cells {
        t.push(vec![
            Cell::Num(c.h_vpp),
            Cell::Num(c.d_vpp),
            Cell::Bool(c.feasible),
            Cell::Text(join(&c.violations)),
        ]);
    }
    if include_required {
        let req = requirement(&m)?;
        let vpp = VppParams::new(req.h_re, req.d_re);
        let r = in_feasible_region(&m.grid, &m.dist, &m.limits, &vpp)?;
        t.push(vec![
            Cell::Num(req.h_re),
            Cell::Num(req.d_re),
            Cell::Bool(r.feasible),
            Cell::Text(join(&r.violations)),
        ]);
    }
    t.render(format)
}

/// Parse `N` or `NxM`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad resolution {s:?}: {e}"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}
