use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phaseland(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaseland"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn decide_prints_trace_lines() {
    let cases = [
        (["0.72", "0.53", "-1.08"], "0.720,0.530,-1.080,2b,YAWL60"),
        (["0", "0", "0"], "0.000,0.000,0.000,1a,HOLD"),
        (
            ["-0.38", "1.00", "0.69"],
            "-0.380,1.000,0.690,1a,ROTR1;FWD1",
        ),
    ];
    for (args, want) in cases {
        let o = phaseland(&["decide", args[0], args[1], args[2]]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn decide_rejects_bad_numbers() {
    for bad in ["abc", "NaN", "inf"] {
        let o = phaseland(&["decide", "0.1", bad, "0.2"]);
        assert_eq!(o.status.code(), Some(1), "{bad}");
    }
    assert_eq!(phaseland(&["decide", "0.1"]).status.code(), Some(1));
}

#[test]
fn sweep_defaults() {
    let o = phaseland(&["sweep"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next(),
        Some("phi_deg,th12_deg,th23_deg,th31_deg")
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 361);
    let zero = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert_eq!(zero[1], 0.0);
    assert_eq!(phaseland(&["sweep", "--n", "2"]).status.code(), Some(1));
    assert_eq!(phaseland(&["sweep", "--z-cm", "-5"]).status.code(), Some(1));
}

fn cone_extrema(args: &[&str]) -> (f64, f64) {
    let o = phaseland(args);
    assert!(o.status.success(), "{}", stderr(&o));
    csv_rows(&stdout(&o))
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r[2]), hi.max(r[2]))
        })
}

#[test]
fn cone_extrema_match_reference_radii() {
    let (lo, hi) = cone_extrema(&["cone", "--theta-limit", "90", "--z-cm", "1000"]);
    assert!((lo - 486.0).abs() <= 0.02 * 486.0 && (hi - 585.0).abs() <= 0.02 * 585.0);
    let (lo, hi) = cone_extrema(&["cone", "--freq-ghz", "2.46", "--theta-limit", "80"]);
    assert!((lo - 419.0).abs() <= 0.02 * 419.0 && (hi - 500.0).abs() <= 0.02 * 500.0);
    assert_eq!(
        phaseland(&["cone", "--theta-limit", "0"]).status.code(),
        Some(1)
    );
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn quintic_csv() -> String {
    let c = [-114.203, 199.396, -228.453, 164.691, -55.965, 7.245];
    let mut text = String::from("theta_deg,voltage_v,power_dbm\n");
    for k in 0..21 {
        let v: f64 = 0.3 + 2.4 * k as f64 / 20.0;
        let theta = c.iter().rev().fold(0.0, |acc, a| acc * v + a);
        text.push_str(&format!("{theta:.15},{v:.15},-20\n"));
    }
    text
}

#[test]
fn fit_recovers_exact_quintic_and_feeds_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let samples = write(dir.path(), "samples.csv", &quintic_csv());
    let profile = dir.path().join("d12.toml").display().to_string();
    let o = phaseland(&[
        "fit", &samples, "--degree", "5", "--pair", "d12", "--out", &profile,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&profile).unwrap();
    let max_err: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max_err_deg = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max_err <= 1e-6);
    assert!(stderr(&o).contains("max_err"));

    let o = phaseland(&["simulate", "--profile", &profile]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn fit_of_repeated_reference_rows_is_rank_deficient() {
    let dir = tempfile::tempdir().unwrap();
    let samples = write(
        dir.path(),
        "d12.csv",
        "theta_deg,voltage_v,power_dbm\n-80,0.223,-20\n-70,0.302,-20\n0,1.533,-20\n0,1.533,-20\n70,2.756,-20\n80,2.837,-20\n",
    );
    let o = phaseland(&["fit", &samples]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("rank-deficient"));
}

#[test]
fn fit_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    assert_eq!(phaseland(&["fit", &empty]).status.code(), Some(2));
    let headed = write(dir.path(), "headed.csv", "theta_deg,voltage_v,power_dbm\n");
    assert_eq!(phaseland(&["fit", &headed]).status.code(), Some(2));
    let bad = write(
        dir.path(),
        "bad.csv",
        "theta_deg,voltage_v,power_dbm\n-80,0.223,-20\n-70,oops,-20\n",
    );
    let o = phaseland(&["fit", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let missing = dir.path().join("missing.csv").display().to_string();
    assert_eq!(phaseland(&["fit", &missing]).status.code(), Some(2));
}

#[test]
fn simulate_reference_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv").display().to_string();
    let o = phaseland(&["simulate", "--out", &out]);
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("converged"));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("iter,x_cm,y_cm,z_cm,heading_deg,v12,v23,v31,sector,maneuvers")
    );
    let first = lines.next().unwrap();
    assert!(first.ends_with(",2b,YAWL60"), "{first}");
}

#[test]
fn simulate_from_nadir_only_holds() {
    let o = phaseland(&["simulate", "--landing-r-cm", "0", "--start-z-cm", "40"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 40);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",HOLD")));
}

#[test]
fn simulate_outside_cone_aborts_with_partial_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv").display().to_string();
    let o = phaseland(&[
        "simulate",
        "--landing-r-cm",
        "260",
        "--landing-phi-deg",
        "0",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("non-ambiguous"));
    assert!(fs::read_to_string(&out).unwrap().starts_with("iter,"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["simulate", "--landing-phi-deg", "145"][..],
        &["cone", "--z-cm", "300,600,900"][..],
        &["sweep", "--n", "1001"][..],
    ] {
        assert_eq!(phaseland(args).stdout, phaseland(args).stdout);
    }
}

#[test]
fn unknown_profile_and_bad_flags_are_usage_errors() {
    assert_eq!(
        phaseland(&["simulate", "--profile", "table9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        phaseland(&["simulate", "--freq-ghz", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        phaseland(&["simulate", "--max-iter", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(phaseland(&["nope"]).status.code(), Some(1));
    assert_eq!(phaseland(&["--help"]).status.code(), Some(0));
}
