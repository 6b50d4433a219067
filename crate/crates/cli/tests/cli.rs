use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pwalk(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn header(args: &[&str]) -> String {
    stdout(args).lines().next().unwrap().to_string()
}

#[test]
fn exact_json_reports_speed_and_class() {
    let rows: Value = serde_json::from_str(&stdout(&[
        "exact", "--p", "0.9", "--q", "0.1", "--L", "8", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(rows[0]["recurrence"], "Recurrent");
    assert!(rows[0]["delta"].as_f64().unwrap().abs() < 1e-12);

    let rows: Value = serde_json::from_str(&stdout(&[
        "exact", "--p", "0.6", "--q", "0.5", "--L", "1", "--format", "json",
    ]))
    .unwrap();
    // two-state chain: (p + q - 1) / (1 - p + q)
    let delta = rows[0]["delta"].as_f64().unwrap();
    assert!((delta - 1.0 / 9.0).abs() < 1e-12, "{delta}");
    assert_eq!(rows[0]["recurrence"], "TransientRight");
}

#[test]
fn invalid_parameters_exit_two() {
    let out = pwalk(&["exact", "--p", "1.5", "--q", "0.5", "--L", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(0,1)") && err.contains("`p`"), "{err}");

    let out = pwalk(&["exact", "--p", "0.5", "--q", "0.5", "--L", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Monte Carlo"));

    let out = pwalk(&["hitting", "--p", "0.5", "--q", "0.5", "--L", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = pwalk(&["exact", "--p", "0.5", "--q", "0.5", "--L", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_headers_are_fixed() {
    assert_eq!(
        header(&["simulate", "--p", "0.7", "--q", "0.4", "--L", "3", "--steps", "5"]),
        "step,position"
    );
    assert_eq!(
        header(&["hitting", "--p", "0.7", "--q", "0.4", "--n", "3"]),
        "n,d_max,d_min,p_max_renew,p_min_renew,pi_n,e_rho_exact,e_rho_asym"
    );
    assert_eq!(
        header(&["sweep", "--p", "0.95", "--q", "0.15", "--L-values", "2,3"]),
        "L,delta,stderr,scaled,mode"
    );
    assert_eq!(
        header(&["cookie-check", "--p", "0.7", "--q", "0.3", "--n", "4"]),
        "T,p,q,origin,max_discrepancy"
    );
    assert_eq!(
        header(&["range", "--p", "0.7", "--q", "0.4", "--n", "3", "--replicas", "10"]),
        "n,mean_rho,stderr_rho,at_max_fraction,stderr_at_max,e_rho_exact,pi_n"
    );
}

#[test]
fn simulate_is_deterministic_and_thins() {
    let args = [
        "simulate", "--p", "0.8", "--q", "0.3", "--L", "inf", "--steps", "1000", "--seed", "7",
    ];
    assert_eq!(pwalk(&args).stdout, pwalk(&args).stdout);
    let thinned = stdout(&[
        "simulate", "--p", "0.8", "--q", "0.3", "--L", "5", "--steps", "100", "--thin", "10",
    ]);
    assert_eq!(thinned.lines().count(), 1 + 11);
    let other = stdout(&[
        "simulate", "--p", "0.8", "--q", "0.3", "--L", "inf", "--steps", "1000", "--seed", "8",
    ]);
    assert_ne!(String::from_utf8(pwalk(&args).stdout).unwrap(), other);
}

fn replay_roundtrip(dir: &Path, args: &[&str]) {
    let out = dir.join("run.csv");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let first = pwalk(&full);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let manifest = dir.join("run.csv.manifest.json");
    let again = dir.join("again.csv");
    let rerun = pwalk(&[
        "replay",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--verify",
    ]);
    assert!(rerun.status.success(), "{}", String::from_utf8_lossy(&rerun.stderr));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap(), "{args:?}");
}

#[test]
fn every_subcommand_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[
            "simulate", "--p", "0.9", "--q", "0.5", "--L", "6", "--steps", "500", "--seed", "3",
        ][..],
        &["exact", "--p", "0.9", "--q", "0.5", "--L", "6"],
        &["hitting", "--p", "0.9", "--q", "0.5", "--n", "20"],
        &[
            "range",
            "--p",
            "0.9",
            "--q",
            "0.5",
            "--n",
            "10",
            "--replicas",
            "50",
            "--seed",
            "1",
        ],
        &[
            "couple",
            "--p",
            "0.9",
            "--q",
            "0.5",
            "--L",
            "4",
            "--kind",
            "position",
            "--steps",
            "200",
            "--replicas",
            "5",
        ],
        &["cookie-check", "--p", "0.9", "--q", "0.5", "--n", "6"],
        &[
            "clt",
            "--p",
            "0.8",
            "--q",
            "0.2",
            "--L",
            "3",
            "--n",
            "1000",
            "--replicas",
            "20",
            "--samples",
        ],
        &[
            "sweep",
            "--p",
            "0.95",
            "--q",
            "0.15",
            "--L-values",
            "3,32",
            "--steps",
            "2000",
            "--replicas",
            "3",
        ],
    ] {
        replay_roundtrip(dir.path(), args);
    }
}

#[test]
fn fig_data_writes_a_directory_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let figs = dir.path().join("figs");
    let figs_s = figs.to_str().unwrap();
    let common = [
        "--trajectory-steps",
        "300",
        "--L-values",
        "4,8,40",
        "--steps",
        "2000",
        "--replicas",
        "2",
        "--svg",
    ];
    let mut args = vec!["fig-data", "--out", figs_s];
    args.extend(common);
    let out = pwalk(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in [
        "fig1.csv",
        "fig2.csv",
        "fig3.csv",
        "fig1.svg",
        "fig2.svg",
        "fig3.svg",
        "manifest.json",
    ] {
        assert!(figs.join(f).exists(), "{f}");
    }
    let fig2 = fs::read_to_string(figs.join("fig2.csv")).unwrap();
    assert!(fig2.starts_with("L,delta,stderr,scaled,mode,reference\n"));
    assert!(fig2.contains(",exact,") && fig2.contains(",monte-carlo,"));

    let again = dir.path().join("again");
    let rerun = pwalk(&[
        "replay",
        figs.join("manifest.json").to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--verify",
    ]);
    assert!(rerun.status.success(), "{}", String::from_utf8_lossy(&rerun.stderr));
    assert_eq!(
        fs::read(figs.join("fig2.csv")).unwrap(),
        fs::read(again.join("fig2.csv")).unwrap()
    );
}

#[test]
fn tampered_manifest_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    assert!(pwalk(&[
        "exact",
        "--p",
        "0.7",
        "--q",
        "0.4",
        "--L",
        "5",
        "--out",
        out.to_str().unwrap()
    ])
    .status
    .success());
    let path = dir.path().join("e.csv.manifest.json");
    let mut m: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    m["outputs"][0]["sha256"] = Value::from("0".repeat(64));
    fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    let rerun = pwalk(&["replay", path.to_str().unwrap(), "--verify"]);
    assert_eq!(rerun.status.code(), Some(1));
}

#[test]
fn unwritable_destination_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = pwalk(&[
        "exact",
        "--p",
        "0.7",
        "--q",
        "0.4",
        "--L",
        "3",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
    assert!(!dir.path().join("missing").exists());
}

#[test]
fn couple_reports_and_rejects_invalid_pairs() {
    let text = stdout(&[
        "couple",
        "--p",
        "0.95",
        "--q",
        "0.15",
        "--L",
        "5",
        "--kind",
        "window",
        "--steps",
        "500",
        "--replicas",
        "4",
    ]);
    assert!(text.starts_with("run,violations,regenerations,final_gap,mean_gap_growth\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("0")));
    // a pair with no order-preserving construction is a usage error
    let out = pwalk(&[
        "couple", "--p", "0.9", "--q", "0.1", "--L", "3", "--kind", "window", "--p2", "0.1", "--q2", "0.9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
