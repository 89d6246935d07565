use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn atlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atlas"))
        .args(args)
        .env_remove("ATLAS_NAME_TABLE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_string()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("atlas-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn atoms_table_matches_symmetry_groups() {
    let out = atlas(&["atoms", "--complexity", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<(String, String)> = text
        .lines()
        .skip(3)
        .map(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            (cols[0].to_string(), cols[1].to_string())
        })
        .collect();
    let expected = [("C1", "Z4"), ("C2", "Z2+Z2"), ("D1", "Z2"), ("D2", "e")];
    assert_eq!(rows.len(), 4, "{text}");
    for (name, group) in expected {
        assert!(
            rows.contains(&(name.to_string(), group.to_string())),
            "{text}"
        );
    }
    assert!(text.is_ascii());
}

#[test]
fn classify_json() {
    let out = atlas(&["classify", "--complexity", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["complexity"], 3);
    assert_eq!(doc["count"], 21);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 21);
    assert_eq!(doc["warnings"], serde_json::json!([]));
    let names: Vec<&str> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"(E3 x F3)/Z3"));
    assert!(names.contains(&"(E1 x F6)/Z6"));
}

#[test]
fn classify_table_and_strict() {
    let out = atlas(&["classify", "--complexity", "2", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(C2 x F2)/Z2 [s=0]"));
    assert!(text.contains("(C2 x F2)/Z2 [s=2]"));
    assert!(text.contains("warnings: none"));

    // Complexity 5 has order-5 actions whose generator pairing stays open.
    let out = atlas(&["classify", "--complexity", "5", "--strict"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("unresolved:"));
    let out = atlas(&["classify", "--complexity", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reduce_half_period_fixture() {
    let out = atlas(&["reduce", "--model", &fixture("d1xf1_halfperiod.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("B x F1"), "{text}");
    assert!(text.contains("|N| = 2"));

    let out = atlas(&["reduce", "--model", &fixture("c2xf2_klein.json")]);
    assert!(stdout(&out).trim_end().ends_with("(B x F2)/Z2"));
}

#[test]
fn invariants_and_chains() {
    let model = scratch(
        "c1f2.json",
        r#"{"format":"adp-v1","atom":"C1","focus_complexity":2,
            "generators":[{"atom_perm":[2,3,0,1],"focus_shift":1,"focus_angle":"0/1"}]}"#,
    );
    let out = atlas(&["chains", "--model", &model]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("(C1 x F2)/Z2"));
    assert!(text.contains("2 chains"));

    let out = atlas(&["chains", "--model", &model, "--dot"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("graph chains {"));
    assert_eq!(dot.matches("subgraph").count(), 2);

    let out = atlas(&["invariants", "--model", &model]);
    let text = stdout(&out);
    assert!(text.contains("rank-0 points: 2"));
    assert!(text.contains("chains (1d:3d): 2:2 2:2"));

    // Non-simple inputs are reduced first.
    let out = atlas(&["invariants", "--model", &fixture("d1xf1_halfperiod.json")]);
    assert!(stdout(&out).contains("model: B x F1"));
}

#[test]
fn emitted_json_round_trips() {
    let out = atlas(&["atoms", "--complexity", "3", "--format", "json"]);
    let atoms = scratch("atoms3.json", &stdout(&out));
    let out = atlas(&["sym", "--file", &atoms, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 10);

    let out = atlas(&["classify", "--complexity", "2", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for (i, entry) in doc["entries"].as_array().unwrap().iter().enumerate() {
        let path = scratch(&format!("entry{i}.json"), &entry.to_string());
        let out = atlas(&["invariants", "--model", &path, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0));
        let inv: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(inv["fingerprint"], entry["fingerprint"]);
        assert_eq!(
            inv["name"].as_str().unwrap(),
            entry["name"].as_str().unwrap().split(" [").next().unwrap()
        );
    }

    let out = atlas(&[
        "reduce",
        "--model",
        &fixture("c2xf2_klein.json"),
        "--format",
        "json",
    ]);
    let reduced = scratch("reduced.json", &stdout(&out));
    let out = atlas(&["reduce", "--model", &reduced]);
    assert!(stdout(&out).contains("|N| = 1"));
}

#[test]
fn output_is_deterministic() {
    let a = atlas(&["classify", "--complexity", "4", "--format", "json"]);
    let b = atlas(&["classify", "--complexity", "4", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = atlas(&["atoms", "--complexity", "4"]);
    let b = atlas(&["atoms", "--complexity", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sym_by_name() {
    let out = atlas(&["sym", "--atom", "E3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Sym = S3 (order 6)"));
    let out = atlas(&["sym", "--atom", "X4"]);
    assert!(stdout(&out).contains("order 8"));
}

#[test]
fn name_table_override() {
    let table = scratch(
        "names.json",
        r#"[{"name":"Bee","sigma":[1,0],"tau":[1,0]}]"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_atlas"))
        .args(["atoms", "--complexity", "1"])
        .env("ATLAS_NAME_TABLE", &table)
        .output()
        .unwrap();
    assert!(stdout(&out).contains("Bee"));
    let out = atlas(&["classify", "--complexity", "1", "--name-table", &table]);
    assert!(stdout(&out).contains("Bee x F1"));
}

#[test]
fn errors_exit_with_one() {
    for args in [
        vec!["frobnicate"],
        vec!["atoms"],
        vec!["atoms", "--complexity", "0"],
        vec!["atoms", "--complexity", "2", "--format", "yaml"],
        vec!["classify", "--complexity", "9"],
        vec!["sym", "--atom", "Q9"],
        vec!["sym"],
        vec!["reduce", "--model", "/nonexistent/model.json"],
    ] {
        let out = atlas(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = scratch(
        "nonfree.json",
        r#"{"format":"adp-v1","atom":"B","focus_complexity":1,
            "generators":[{"atom_perm":[1,0],"focus_shift":0,"focus_angle":"1/2"}]}"#,
    );
    let out = atlas(&["reduce", "--model", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not free"));

    assert_eq!(atlas(&["--help"]).status.code(), Some(0));
    assert_eq!(atlas(&["--version"]).status.code(), Some(0));
}
