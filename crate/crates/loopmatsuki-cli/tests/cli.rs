use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use loopmatsuki::io::{validate_row, OrbitRow};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_loopmatsuki"));
    c.env_remove("LOOPMATSUKI_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// TSV body rows split into columns, header dropped.
fn tsv(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split('\t').map(String::from).collect()).collect()
}

#[test]
fn split_twisted_spherical_table() {
    let out = stdout(&run(&[
        "orbits", "--family", "split_gl", "--n", "2", "--epsilon", "-1", "--level", "spherical", "--bound", "2", "--format",
        "tsv",
    ]));
    let got: Vec<(String, String, String)> =
        tsv(&out).into_iter().map(|r| (r[3].clone(), r[4].clone(), r[5].clone())).collect();
    // equal entries: parity decides Sym2 (even) or Alt2 (odd); distinct entries must both be even
    let mut want = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=a {
            let row = if a == b {
                if a % 2 == 0 {
                    ("Sym2", "(2)")
                } else {
                    ("Alt2", "()")
                }
            } else if a % 2 == 0 && b % 2 == 0 {
                ("Sym1,Sym1", "(2,2)")
            } else {
                continue;
            };
            want.push((format!("({a},{b})"), row.0.to_string(), row.1.to_string()));
        }
    }
    want.sort();
    let mut sorted = got.clone();
    sorted.sort();
    assert_eq!(sorted, want);
    for (lam, _, _) in &got {
        assert!(lam != "(1,0)" && lam != "(2,1)" && lam != "(1,-1)", "mixed parity row {lam}");
    }
}

#[test]
fn unitary_bound_zero_has_three_rows() {
    let out = stdout(&run(&["orbits", "--family", "unitary", "--bound", "0", "--format", "tsv"]));
    let labels: Vec<String> = tsv(&out).into_iter().map(|r| r[4].clone()).collect();
    assert_eq!(labels, ["sig(0,2)", "sig(1,1)", "sig(2,0)"]);
}

#[test]
fn rank_one_tables() {
    let out = stdout(&run(&["orbits", "--family", "split_gl", "--n", "1", "--bound", "2", "--format", "tsv"]));
    let rows = tsv(&out);
    assert_eq!(rows.len(), 5);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r[3], format!("({})", k as i64 - 2));
        assert_eq!(r[4], "Sym1");
    }
}

#[test]
fn canonicalize_examples() {
    let dir = tempfile::tempdir().unwrap();
    let diag = write(dir.path(), "diag.json", r#"[["t^2","0"],["0","t"]]"#);
    let v: Value = serde_json::from_str(&stdout(&run(&[
        "canonicalize",
        diag.to_str().unwrap(),
        "--family",
        "split_gl",
        "--precision",
        "8",
    ])))
    .unwrap();
    assert_eq!(v["lambda"], serde_json::json!([2, 1]));
    assert_eq!(v["class"]["label"], "Sym1,Sym1");
    assert_eq!(v["class"]["component_group"], serde_json::json!([2, 2]));

    let quat = write(dir.path(), "quat.json", r#"[["0","t"],["-t","0"]]"#);
    let v: Value = serde_json::from_str(&stdout(&run(&[
        "canonicalize",
        quat.to_str().unwrap(),
        "--family",
        "split_gl",
        "--epsilon",
        "-1",
        "--side",
        "eta",
    ])))
    .unwrap();
    assert_eq!(v["lambda"], serde_json::json!([1, 1]));
    assert_eq!(v["class"]["aut_label"], "GL1(H)");

    let one = write(dir.path(), "one.json", r#"{"precision": 6, "entries": [["1","0"],["0","1"]]}"#);
    let v: Value = serde_json::from_str(&stdout(&run(&["canonicalize", one.to_str().unwrap(), "--family", "split_gl"])))
        .unwrap();
    assert_eq!(v["lambda"], serde_json::json!([0, 0]));
    assert_eq!(v["class"]["label"], "Sym2");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"[["t^","0"],["0","1"]]"#);
    let diag = write(dir.path(), "diag.json", r#"[["t^2","0"],["0","t"]]"#);
    let plain = write(dir.path(), "plain.json", r#"[["t","0"],["0","1"]]"#);
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["canonicalize", bad.to_str().unwrap(), "--family", "split_gl"]), Some(2));
    assert_eq!(code(&["orbits", "--family", "no_such_family"]), Some(2));
    assert_eq!(code(&["orbits", "--family", "split_gl", "--z", "2"]), Some(3));
    assert_eq!(code(&["canonicalize", diag.to_str().unwrap(), "--family", "split_gl", "--precision", "3"]), Some(4));
    assert_eq!(
        code(&["canonicalize", plain.to_str().unwrap(), "--family", "split_gl", "--epsilon", "-1", "--precision", "8"]),
        Some(5)
    );
    assert_eq!(code(&["selftest", "--criteria", "11"]), Some(2));
}

#[test]
fn unitary_match_report() {
    let out = stdout(&run(&["match", "--family", "unitary", "--bound", "1", "--verify-samples", "20", "--seed", "7"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pairs"], 4);
    assert_eq!(v["failures"], 0);
    for p in v["matched"].as_array().unwrap() {
        assert_eq!(p["samples"], 20);
        assert_eq!(p["theta"]["label"], p["eta"]["label"]);
    }
}

#[test]
fn kottwitz_twisted_split() {
    let out = stdout(&run(&["kottwitz", "--family", "split_gl", "--epsilon", "-1", "--bound", "1", "--format", "tsv"]));
    let rows: Vec<(String, String)> = tsv(&out).into_iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    // bound 1 admits (-1,-1), (0,0) and (1,1); one class each
    assert_eq!(
        rows,
        [("(-1,-1)".into(), "Alt2".into()), ("(0,0)".into(), "Sym2".into()), ("(1,1)".into(), "Alt2".into())]
    );
}

#[test]
fn parabolic_bundle_lines() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.json", r#"[["1","0"],["0","1"]]"#);
    let flip = write(dir.path(), "flip.json", r#"[["1","0"],["0","-1"]]"#);
    let bundle = |g: &Path, w: &str| -> Value {
        serde_json::from_str(&stdout(&run(&[
            "bundle",
            g.to_str().unwrap(),
            "--family",
            "split_gl",
            "--tw-lambda",
            "0,0",
            "--tw-w",
            w,
        ])))
        .unwrap()
    };
    let a = bundle(&one, "0,1");
    assert_eq!(a["lines"], serde_json::json!({"l0": [1, 0], "linf": [1, 0]}));
    let b = bundle(&flip, "1,0");
    assert_eq!(b["lines"], serde_json::json!({"l0": [1, 0], "linf": [0, 1]}));
    assert_eq!(b["aut_label"], "C^x");
    assert_eq!(b["c"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["match", "--family", "quaternionic_gl", "--epsilon", "-1", "--bound", "1", "--samples", "3"];
    let o = run(&[&args[..], &["--seed", "11", "--out", a.to_str().unwrap()]].concat());
    assert!(o.status.success());
    let o = bin().args(args).args(["--out", b.to_str().unwrap()]).env("LOOPMATSUKI_SEED", "11").output().unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let orbits = ["orbits", "--family", "split_gl", "--level", "iwahori", "--side", "both", "--bound", "1"];
    assert_eq!(run(&orbits).stdout, run(&orbits).stdout);
}

#[test]
fn emitted_rows_reingest() {
    for (family, eps, level) in
        [("split_gl", "-1", "spherical"), ("quaternionic_gl", "1", "spherical"), ("unitary", "1", "iwahori")]
    {
        let out = stdout(&run(&[
            "orbits", "--family", family, "--epsilon", eps, "--level", level, "--side", "both", "--bound", "1",
        ]));
        let rows: Vec<OrbitRow> = serde_json::from_str(&out).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            validate_row(r).unwrap_or_else(|e| panic!("{family} {level} {:?} {}: {e}", r.lambda, r.label));
        }
    }
}

#[test]
fn config_file_and_inner_twist() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "u.json", r#"{"family": "unitary", "n": 2, "epsilon": 1}"#);
    let twist = write(dir.path(), "g.json", r#"[["1","0"],["0","-1"]]"#);
    let base = stdout(&run(&["orbits", "--config", cfg.to_str().unwrap(), "--bound", "2", "--format", "tsv"]));
    let twisted = stdout(&run(&[
        "orbits",
        "--config",
        cfg.to_str().unwrap(),
        "--inner-twist",
        twist.to_str().unwrap(),
        "--bound",
        "2",
        "--format",
        "tsv",
    ]));
    assert_eq!(base, twisted);
    let bad = write(dir.path(), "bad.json", r#"{"family": "unitary", "n": 2, "epsilon": 1, "extra": 0}"#);
    assert_eq!(run(&["orbits", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_subset() {
    let o = run(&["selftest", "--criteria", "1,2,3,4,5,8,10", "--seed", "3", "--format", "tsv"]);
    let out = stdout(&o);
    let rows = tsv(&out);
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[1] == "pass"), "{out}");
}
