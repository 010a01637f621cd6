use std::process::{Command, Output};

use fsgap::gapver::GapReport;
use fsgap::tuner::{published, read_table_csv};
use serde_json::Value;

fn fsgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn table_one_matches_and_round_trips() {
    let o = fsgap(&[
        "tables",
        "--lattice",
        "hypercubic",
        "--dim",
        "2",
        "--ell",
        "2..9",
        "--compare",
        "paper",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_table_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 8);
    for (r, p) in rows.iter().zip(published::HYPERCUBIC_D2.1) {
        assert!((r.t_ell - p).abs() <= 0.005 + 1e-9);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("8/8"));
}

#[test]
fn ell_one_is_usage_error() {
    let o = fsgap(&[
        "tables",
        "--lattice",
        "hypercubic",
        "--dim",
        "2",
        "--ell",
        "1",
    ]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_subcommand_and_flag_exit_two() {
    let o = fsgap(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = fsgap(&["tables", "--lattice", "honeycomb", "--ell", "3", "--bogus"]);
    assert_eq!(code(&o), 2);
    let o = fsgap(&["tables", "--lattice", "square", "--ell", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn triangular_uniform_census() {
    let o = fsgap(&[
        "census",
        "--lattice",
        "triangular",
        "--ell",
        "2",
        "--uniform",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut found = std::collections::BTreeMap::new();
    for e in v["summary"]["shape_max"].as_array().unwrap() {
        if let Some(k) = e["k"].as_str() {
            found.insert(k.to_string(), e["value"]["float"].as_f64().unwrap());
        }
    }
    assert_eq!(found.get("K1"), Some(&7.0));
    assert_eq!(found.get("K2"), Some(&12.0));
    assert_eq!(found.get("K3"), Some(&8.0));
    assert_eq!(v["comparison"]["all_equal"], Value::Bool(true));
}

#[test]
fn census_mismatch_exits_one() {
    let o = fsgap(&[
        "census",
        "--lattice",
        "honeycomb",
        "--ell",
        "2",
        "--uniform",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("K1"));
}

#[test]
fn census_requires_large_torus() {
    let o = fsgap(&[
        "census",
        "--lattice",
        "triangular",
        "--ell",
        "2",
        "--L",
        "4",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bound_range_and_precision() {
    let o = fsgap(&["bound", "--lattice", "triangular", "--ell", "10..12"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert_eq!(
        code(&fsgap(&["bound", "--lattice", "triangular", "--ell", "9"])),
        2
    );
    assert_eq!(
        code(&fsgap(&[
            "bound",
            "--lattice",
            "triangular",
            "--ell",
            "10",
            "--precision",
            "20"
        ])),
        2
    );
    let o = fsgap(&[
        "bound",
        "--lattice",
        "honeycomb",
        "--ell",
        "10",
        "--precision",
        "200",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["bound"]["a_num"].to_string(), "411");
    assert_eq!(v[0]["bound"]["a_den"].to_string(), "2750");
}

#[test]
fn lambda_override_grammar() {
    let ok = fsgap(&[
        "tables",
        "--lattice",
        "honeycomb",
        "--ell",
        "5",
        "--lambda",
        "-6/11",
        "--format",
        "json",
    ]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!((v[0]["lambda_star"].as_f64().unwrap() + 6.0 / 11.0).abs() < 1e-15);
    let sqrt = fsgap(&[
        "tables",
        "--lattice",
        "hypercubic",
        "--ell",
        "4",
        "--lambda",
        "-1/2,1/2,2",
    ]);
    assert_eq!(code(&sqrt), 0);
    assert_eq!(
        code(&fsgap(&[
            "tables",
            "--lattice",
            "hypercubic",
            "--ell",
            "4",
            "--lambda",
            "1,2"
        ])),
        2
    );
    assert_eq!(
        code(&fsgap(&[
            "tables",
            "--lattice",
            "hypercubic",
            "--ell",
            "4",
            "--lambda",
            "1,1,3"
        ])),
        2
    );
}

#[test]
fn out_dir_writes_manifest_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |d: &std::path::Path| {
        vec![
            "tables".to_string(),
            "--lattice".into(),
            "triangular".into(),
            "--ell".into(),
            "3..6".into(),
            "--out".into(),
            d.display().to_string(),
        ]
    };
    for d in [a.path(), b.path()] {
        let argv = args(d);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        let o = fsgap(&argv);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    let ta = std::fs::read(a.path().join("tables.csv")).unwrap();
    let tb = std::fs::read(b.path().join("tables.csv")).unwrap();
    assert_eq!(ta, tb);
    assert_eq!(read_table_csv(ta.as_slice()).unwrap().len(), 4);
    let strip = |p: &std::path::Path| {
        let mut v: Value =
            serde_json::from_slice(&std::fs::read(p.join("manifest.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        v["outputs"] = Value::Null;
        v
    };
    let ma = strip(a.path());
    assert_eq!(ma, strip(b.path()));
    assert_eq!(ma["command"], "tables");
    assert_eq!(ma["parameters"]["ell"], "3..6");
}

#[test]
fn gap_json_round_trips() {
    let o = fsgap(&["gap", "--lattice", "hypercubic", "--L", "3"]);
    assert_eq!(code(&o), 0);
    let r: GapReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r.gamma - 1.5).abs() < 1e-10);
    assert_eq!(r.dimension, 512);
    assert_eq!(
        code(&fsgap(&["gap", "--lattice", "hypercubic", "--L", "5"])),
        2
    );
    assert_eq!(code(&fsgap(&["gap", "--lattice", "hypercubic"])), 2);
}

#[test]
fn spinwave_rows() {
    let o = fsgap(&[
        "spinwave",
        "--lattice",
        "hypercubic",
        "--L",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["gap"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let o = fsgap(&[
        "spinwave",
        "--lattice",
        "honeycomb",
        "--L",
        "10..11",
        "--bc",
        "open",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);
}

#[test]
fn verify_small_torus() {
    let o = fsgap(&[
        "verify",
        "--lattice",
        "hypercubic",
        "--L",
        "3",
        "--ell",
        "2",
        "--jobs",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["verdict"]["holds"], Value::Bool(true));
}
