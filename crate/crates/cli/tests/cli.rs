use std::path::PathBuf;
use std::process::{Command, Output};

fn tilespace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilespace"))
        .args(args)
        .env_remove("TILESPACE_DATASET")
        .output()
        .expect("run tilespace")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tilespace-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn validate_lists_counts() {
    let o = tilespace(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tiles 36, edges 45, vertices 10, rules 36\n"));
    let o = tilespace(&["validate", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["counts"]["rules"], 36);
    assert_eq!(v["passed"], true);
}

#[test]
fn enumerate_matches() {
    let o = tilespace(&["enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("derived 36 tiles, match: exact\n"));
}

#[test]
fn forcing_passes_and_uncollared_fails() {
    let o = tilespace(&["forcing"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "edge-level border forcing at k=1: PASS (180/180 sides singleton)\n"
    );
    let o = tilespace(&["forcing", "--uncollared", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn incidence_formats() {
    let o = tilespace(&["incidence", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tile_sides"], 180);
    let o = tilespace(&["incidence", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("statistic,key,value\n"));
    assert!(text.contains("distinct_vertex_histogram,4,25\n"));
    assert!(text.contains("distinct_vertex_histogram,5,11\n"));
}

#[test]
fn complex_json_schema() {
    let o = tilespace(&["complex", "--export", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "faces",
        "edges",
        "vertices",
        "boundary2",
        "boundary1",
        "S2",
        "S1",
        "S0",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
    assert_eq!(v["boundary2"].as_array().unwrap().len(), 45);
    assert_eq!(v["S2"].as_array().unwrap().len(), 36);
}

#[test]
fn dot_exports_agree() {
    let a = tilespace(&["complex", "--export", "dot", "--faces"]);
    let b = tilespace(&["export-dot", "--faces"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("digraph"));
}

#[test]
fn cohomology_json_is_deterministic() {
    let a = tilespace(&["cohomology", "--json"]);
    let b = tilespace(&["cohomology", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["degrees"][0]["limit"]["rational_dim"], 1);
}

#[test]
fn fib_prints_the_collared_rules() {
    let o = tilespace(&["fib"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("border forcing: k=2\n"));
    for eq in [
        "σ²(a1)=(b3)a1b1(b2)",
        "σ²(b1)=(b1)b2a1b1(b2)",
        "σ²(b2)=(b1)b2a1b3(a1)",
        "σ²(b3)=(b1)b2a1b3(a1)",
    ] {
        assert!(text.contains(eq), "{eq}");
    }
}

#[test]
fn subst1d_reads_rules() {
    let dir = scratch("subst1d");
    let path = dir.join("tm.txt");
    std::fs::write(&path, "# Thue-Morse\na -> ab\nb -> ba\n").unwrap();
    let o = tilespace(&["subst1d", "--rules", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("border forcing: k=1\n"));
    std::fs::write(&path, "a => b\n").unwrap();
    let o = tilespace(&["subst1d", "--rules", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn shift_is_seeded() {
    let a = tilespace(&["shift", "--depth", "3", "--seed", "11"]);
    let b = tilespace(&["--seed", "11", "shift", "--depth", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let walk = v["walk"].as_array().unwrap();
    assert_eq!(walk[0]["realized"].as_array().unwrap().len(), 4);
    assert_eq!(walk[1]["op"], "shift_right");
}

#[test]
fn dataset_dir_and_out_file() {
    let dir = scratch("dataset");
    tilespace::dataset::PentagonDataset::embedded()
        .write_dir(&dir)
        .unwrap();
    let out = dir.join("report.txt");
    let o = tilespace(&[
        "--dataset",
        dir.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "enumerate",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .contains("match: exact"));

    let o = Command::new(env!("CARGO_BIN_EXE_tilespace"))
        .arg("validate")
        .env("TILESPACE_DATASET", dir.join("missing"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mutated_rule_fails_validation_downstream() {
    let dir = scratch("mutated");
    let d = tilespace::dataset::PentagonDataset::embedded();
    let mut children = d.children(tilespace::cells::TileId(21));
    children.swap(1, 2);
    d.with_rule(tilespace::cells::TileId(21), children)
        .write_dir(&dir)
        .unwrap();
    let o = tilespace(&["--dataset", dir.to_str().unwrap(), "cohomology"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tilespace(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        tilespace(&["complex", "--export", "svg"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tilespace(&["fib", "--format", "dot"]).status.code(),
        Some(2)
    );
    assert_eq!(tilespace(&[]).status.code(), Some(2));
}
