use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use serde_json::Value;
use vpp_ffr_cli::scenario::{IbrSection, VppSection};
use vpp_ffr_cli::Scenario;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vpp-ffr"))
}

fn table1_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/table1.json")
}

fn write_scenario(dir: &tempfile::TempDir, s: &Scenario) -> PathBuf {
    let p = dir.path().join("scenario.json");
    std::fs::write(&p, s.to_json()).unwrap();
    p
}

fn run(args: &[&str], scenario: &Path) -> Output {
    bin().args(args).arg("--scenario").arg(scenario).output().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn shipped_scenario_matches_builtin_table() {
    let text = std::fs::read_to_string(table1_path()).unwrap();
    assert_eq!(Scenario::from_json(&text).unwrap(), Scenario::table1());
}

#[test]
fn simulate_ends_at_quasi_steady_state() {
    let o = run(&["simulate", "--which", "ode", "--stride", "1000"], &table1_path());
    assert!(o.status.success());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows[0], ["t", "delta_f_hz", "p_sg_pu", "p_vpp_pu"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "60");
    let df: f64 = last[1].parse().unwrap();
    assert_abs_diff_eq!(df, -0.35, epsilon = 1e-3);
}

#[test]
fn simulate_both_has_aligned_columns_and_final_sample() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.sim.t_end_s = 1.05;
    s.sim.dt_s = 0.01;
    let p = write_scenario(&dir, &s);
    let out = dir.path().join("traj.csv");
    let o = bin()
        .args(["simulate", "--which", "both", "--stride", "10", "--scenario"])
        .arg(&p)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[0].len(), 5);
    assert!(rows.iter().all(|r| r.len() == 5));
    let times: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(times.first(), Some(&"0"));
    assert_eq!(times.last(), Some(&"1.05"));
    assert_eq!(times.len(), 12);
}

#[test]
fn simulate_without_ibrs_uses_given_vpp() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.ibrs.clear();
    s.vpp = Some(VppSection {
        h_vpp_s: 19.125,
        d_vpp_pu: 12.109,
    });
    s.sim.t_end_s = 2.0;
    let o = run(&["simulate", "--which", "closed-form", "--format", "json"], &write_scenario(&dir, &s));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2001);
    assert!(v[2000]["delta_f_hz"].as_f64().unwrap() < -0.1);
}

#[test]
fn requirements_reports_table1_values() {
    let o = run(&["requirements"], &table1_path());
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_abs_diff_eq!(v["requirement"]["h_re"].as_f64().unwrap(), 19.125, epsilon = 0.5);
    assert_abs_diff_eq!(v["requirement"]["d_re"].as_f64().unwrap(), 12.109, epsilon = 1e-3);
    assert_abs_diff_eq!(v["metrics"]["qss"].as_f64().unwrap(), 0.35, epsilon = 1e-6);
    assert_eq!(v["feasible"], true);
}

#[test]
fn loose_limits_need_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.limits.rocof_hz_per_s = 100.0;
    s.limits.nadir_hz = 100.0;
    s.limits.qss_hz = 100.0;
    let o = run(&["requirements"], &write_scenario(&dir, &s));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["requirement"]["h_re"].as_f64(), Some(0.0));
    assert_eq!(v["requirement"]["d_re"].as_f64(), Some(0.0));
}

#[test]
fn tight_limits_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.limits.qss_hz = 0.02;
    s.limits.nadir_hz = 0.02;
    let o = run(&["requirements"], &write_scenario(&dir, &s));
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"]["kind"], "unsatisfiable");
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_scenario_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.disturbance.delta_p_pu = -0.25;
    let o = run(&["requirements"], &write_scenario(&dir, &s));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["code"], 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["allocate"], &bad).status.code(), Some(2));
    assert_eq!(run(&["allocate"], &dir.path().join("missing.json")).status.code(), Some(2));

    let o = bin().args(["region", "--resolution", "x"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    stderr_json(&o);
}

#[test]
fn overdamped_closed_form_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.vpp = Some(VppSection {
        h_vpp_s: 0.0,
        d_vpp_pu: 400.0,
    });
    let o = run(&["simulate", "--which", "closed-form"], &write_scenario(&dir, &s));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "numeric");
}

#[test]
fn allocate_single_ibr_takes_everything() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    s.ibrs = vec![IbrSection {
        alpha_per_s: 2.0,
        beta_per_pu: 1.0,
        p_rated_pu: 0.25,
        p_available_pu: None,
        h_min_s: 0.0,
        h_max_s: None,
        d_min_pu: 0.0,
        d_max_pu: None,
    }];
    let o = run(&["allocate", "--samples", "20"], &write_scenario(&dir, &s));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let alloc = &v["bargain"]["chosen"]["allocation"];
    assert_eq!(alloc["h"][0], v["requirement"]["h_re"]);
    assert_eq!(alloc["d"][0], v["requirement"]["d_re"]);
}

#[test]
fn allocate_reports_positive_deltas() {
    let o = run(&["allocate"], &table1_path());
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["nash_gain_pct"].as_f64().unwrap() > 0.0);
    assert!(v["f_vpp_increase_pct"].as_f64().unwrap() > 0.0);
    assert!(v["bargain"]["front"].as_array().unwrap().len() > 1);
}

#[test]
fn allocating_more_than_the_fleet_can_give_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Scenario::table1();
    for i in &mut s.ibrs {
        i.h_max_s = Some(1.0);
    }
    let o = run(&["allocate"], &write_scenario(&dir, &s));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn seed_flag_changes_front_and_is_reproducible() {
    let a = run(&["pareto", "--format", "csv", "--seed", "1"], &table1_path());
    let b = run(&["pareto", "--format", "csv", "--seed", "1"], &table1_path());
    let c = run(&["pareto", "--format", "csv", "--seed", "2"], &table1_path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let rows = csv_rows(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(rows[0][0], "f_vpp");
    assert_eq!(rows[0][8], "f_ibr_8");
}

#[test]
fn region_single_cell_and_required_point() {
    let o = run(&["region", "--resolution", "1"], &table1_path());
    assert!(o.status.success());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][..3], ["0", "0", "false"]);
    assert_eq!(rows[1][3], "rocof;nadir;qss");

    let o = run(&["region", "--resolution", "3x2", "--include-required"], &table1_path());
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 1 + 6 + 1);
    assert_eq!(rows.last().unwrap()[2], "true");
}
