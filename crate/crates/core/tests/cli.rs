//! The `wpcn` binary end to end: exit codes, error messages, outputs.

use std::collections::BTreeMap;
use std::process::{Command, Output};

fn wpcn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpcn"))
        .args(args)
        .env_remove("WPCN_THREADS")
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

fn key_values(out: &Output) -> BTreeMap<String, String> {
    text(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn number(map: &BTreeMap<String, String>, key: &str) -> f64 {
    map[key].parse().unwrap()
}

#[test]
fn unknown_flag_exits_1_and_names_it() {
    let out = wpcn(&["solve", "--scheme", "dtb-njd", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("--frobnicate"));
}

#[test]
fn unknown_config_key_exits_1_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# comment\nd_xd = 30\nmystery_knob = 4\n").unwrap();
    let out = wpcn(&["solve", "--scheme", "dtb-njd", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("mystery_knob"));
}

#[test]
fn invalid_value_exits_1() {
    let out = wpcn(&["solve", "--scheme", "noncoop", "--set", "ce_overhead=1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = wpcn(&["solve", "--scheme", "noncoop", "--set", "d_xd=far"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symmetric_instance_splits_the_exchange_evenly() {
    let out = wpcn(&[
        "solve", "--scheme", "stbc-njd", "--set", "h_ex=1e-5", "--set", "h_ey=1e-5", "--set", "h_xy=1e-6",
        "--set", "h_yx=1e-6", "--set", "h_xd=1e-7", "--set", "h_yd=1e-7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let kv = key_values(&out);
    assert!((number(&kv, "t2") - number(&kv, "t3")).abs() < 1e-6);
    assert!((number(&kv, "r_x") - number(&kv, "r_y")).abs() < 1e-6);
    assert_eq!(kv["converged"], "true");
}

#[test]
fn explicit_gains_override_geometry() {
    let base = key_values(&wpcn(&["solve", "--scheme", "noncoop", "--set", "t1_step=0.01"]));
    let moved = key_values(&wpcn(&["solve", "--scheme", "noncoop", "--set", "t1_step=0.01", "--set", "d_xd=70"]));
    let pinned = key_values(&wpcn(&[
        "solve", "--scheme", "noncoop", "--set", "t1_step=0.01", "--set", "d_xd=70", "--set", "h_xd=1e-6",
        "--set", "h_yd=1e-6", "--set", "h_ex=1e-4", "--set", "h_ey=1e-4",
    ]));
    let pinned_far = key_values(&wpcn(&[
        "solve", "--scheme", "noncoop", "--set", "t1_step=0.01", "--set", "d_xd=20", "--set", "h_xd=1e-6",
        "--set", "h_yd=1e-6", "--set", "h_ex=1e-4", "--set", "h_ey=1e-4",
    ]));
    assert_ne!(base["common"], moved["common"]);
    assert_eq!(pinned["common"], pinned_far["common"]);
}

#[test]
fn oracle_approaches_the_solver_from_below() {
    let solved = key_values(&wpcn(&["solve", "--scheme", "dtb-njd"]));
    let coarse = key_values(&wpcn(&["oracle", "--scheme", "dtb-njd", "--step", "0.005"]));
    let fine = key_values(&wpcn(&["oracle", "--scheme", "dtb-njd", "--step", "0.0025"]));
    let (s, c, f) = (number(&solved, "common"), number(&coarse, "common"), number(&fine, "common"));
    assert!(s >= f && f >= c, "solver {s} fine grid {f} coarse grid {c}");
    assert!(s <= f * 1.01, "solver {s} fine grid {f}");
    assert_eq!(coarse["grid_step"], "0.005");
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let out = wpcn(&[
        "sweep", "--set", "sweep_kind=inter_user_distance", "--set", "sweep_points=2", "--set", "schemes=noncoop,dtb-njd",
        "--set", "t1_step=0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = text(&out.stdout);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "sweep_value,scheme,common,t1,t2,t3,t4a,t4b,r_x,r_y,converged");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("1,dtb-njd,"));
    assert!(lines[2].starts_with("1,noncoop,"));
    assert!(lines[4].starts_with("10,noncoop,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn sweep_without_kind_is_a_config_error() {
    let out = wpcn(&["sweep"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn figures_writes_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = wpcn(&["figures", "--out", dir.path().to_str().unwrap(), "--set", "sweep_points=2", "--set", "t1_step=0.02"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    for name in ["fig6.csv", "fig7.csv", "fig8.csv", "fig9.csv"] {
        let body = std::fs::read_to_string(dir.path().join(name)).unwrap();
        // header plus 2 points x 7 schemes
        assert_eq!(body.lines().count(), 15, "{name}");
    }
}

#[test]
fn thread_settings_do_not_change_output() {
    let args = [
        "sweep", "--set", "sweep_kind=en_channel_disparity_db", "--set", "sweep_points=3", "--set", "t1_step=0.02",
    ];
    let reference = wpcn(&args).stdout;
    let one = Command::new(env!("CARGO_BIN_EXE_wpcn")).args(args).env("WPCN_THREADS", "1").output().unwrap();
    assert_eq!(one.stdout, reference);
    let mut seq = vec!["--sequential"];
    seq.extend(args);
    assert_eq!(wpcn(&seq).stdout, reference);
}

#[test]
fn bad_thread_env_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_wpcn"))
        .args(["solve", "--scheme", "noncoop"])
        .env("WPCN_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("WPCN_THREADS"));
}

#[test]
fn strict_reports_unconverged_results_with_exit_2() {
    // One bisection step cannot close the equal-rate gap.
    let args = ["solve", "--scheme", "stbc-njd", "--set", "max_bisection_iters=1", "--set", "t1_step=0.05"];
    let lenient = wpcn(&args);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(key_values(&lenient)["converged"], "false");
    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(wpcn(&strict).status.code(), Some(2));
}
