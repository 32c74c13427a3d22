use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_annular-skein"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn transverse_reports_worked_braid_values() {
    let dir = TempDir::new().unwrap();
    let w = write(&dir, "w.braid", "3\n1 -2\n");
    let out = run(&["transverse", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sl"], -3);
    assert_eq!(v["f_min"], -3);
    let g = &v["psi_gradings"];
    assert_eq!((g["h"].as_i64(), g["q"].as_i64(), g["f"].as_i64()), (Some(0), Some(-3), Some(-3)));
}

#[test]
fn compare_conjugates_exits_zero_and_control_exits_one() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.braid", "3\n1 -2\n");
    let b = write(&dir, "b.braid", "3\n2 1 -2 -2\n");
    let out = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equal"], true);

    let c = write(&dir, "c.braid", "2\n1 1 1\n");
    let d = write(&dir, "d.braid", "2\n1 1 -1\n");
    let out = run(&["compare", c.to_str().unwrap(), d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["equal"], false);
}

#[test]
fn malformed_input_exits_two_without_output() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("x.braid", "3\n1 x\n"), ("y.braid", "2\n1 3\n"), ("z.slice", "1\nX 5 +\n")] {
        let p = write(&dir, name, text);
        for cmd in ["skein-homology", "transverse", "decompose"] {
            let out = run(&[cmd, p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(2), "{cmd} {name}");
            assert!(out.stdout.is_empty(), "{cmd} {name}");
        }
    }
    let out = run(&["skein-homology", dir.path().join("missing.braid").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transverse_rejects_slice_input() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "u.slice", "0\nU 1\nA 1\n");
    let out = run(&["transverse", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.braid", "2\n1 1 1\n");
    let one = run(&["--jobs", "1", "khovanov-homology", p.to_str().unwrap()]);
    let two = run(&["khovanov-homology", "--jobs", "3", p.to_str().unwrap()]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn jobs_must_be_positive() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.braid", "2\n1\n");
    assert_eq!(run(&["--jobs", "0", "skein-homology", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn permuted_crossings_keep_homology() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f.braid", "3\n1 -2 1 -2\n");
    for perm in ["reverse", "shuffle:7", "3,1,0,2"] {
        for cmd in ["skein-homology", "khovanov-homology"] {
            let out = run(&[cmd, p.to_str().unwrap(), "--permute-crossings", perm]);
            assert_eq!(out.status.code(), Some(0), "{cmd} {perm}");
        }
    }
    let out = run(&["skein-homology", p.to_str().unwrap(), "--permute-crossings", "0,0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_table_formats() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "w.braid", "3\n1 -2\n");
    let csv = run(&["skein-homology", p.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().count() > 1);
    let table = run(&["--ring", "Z2", "decompose", p.to_str().unwrap(), "--format", "table"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("decomposition.skein_entries")));
}

#[test]
fn verify_moduli_on_given_diagrams() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c3.braid", "4\n-1 2 1 3 2\n");
    let out = run(&["verify-moduli", p.to_str().unwrap(), "--index", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["c3"].as_array().is_some_and(|c| !c.is_empty()));
    let out = run(&["verify-moduli", p.to_str().unwrap(), "--index", "3", "--convention", "opposite"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["verify-moduli", "--index", "4"]).status.code(), Some(2));
}

#[test]
fn extreme_map_at_psi_grading() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "w.braid", "3\n1 -2\n");
    let out = run(&["extreme-map", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["q"].as_i64(), v["f_min"].as_i64()), (Some(-3), Some(-3)));
    let out = run(&["extreme-map", p.to_str().unwrap(), "--q", "-101"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selfcheck_reports_falsified_properties() {
    let dir = TempDir::new().unwrap();
    write(&dir, "trefoil.braid", "2\n1 1 1\n");
    write(&dir, "worked.braid", "3\n1 -2\n");
    let out = bin().arg("selfcheck").env("ANNULAR_SKEIN_CORPUS", dir.path()).output().unwrap();
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let failing: Vec<&str> =
        checks.iter().filter(|c| c["holds"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(out.status.code(), Some(if failing.is_empty() { 0 } else { 1 }));
    assert!(checks.iter().any(|c| c["criterion"] == 8));
    assert!(failing.contains(&"phi_s is a chain map"), "{failing:?}");
}
