use std::fs;
use std::process::Command;

use cellkit::cli::{load_cache, run, save_cache, Outcome};
use cellkit::euler::EulerCache;
use jsonschema::JSONSchema;
use num_bigint::BigUint;
use serde_json::Value;

fn cellkit(args: &[&str]) -> Outcome {
    let mut v = vec!["cellkit"];
    v.extend_from_slice(args);
    run(v)
}

fn doc(args: &[&str]) -> Value {
    let out = cellkit(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

/// Synthetic rank 3 dims: (s, trivial) entries plus the (z1z2, z1z2) entry.
fn bd_dims(trivial: &[(&str, u32)], d12m: u32) -> String {
    let mut rows: Vec<Value> = trivial.iter().map(|(s, d)| serde_json::json!({"s": s, "rho": "000", "dim": d})).collect();
    rows.push(serde_json::json!({"s": "110", "rho": "110", "dim": d12m}));
    Value::Array(rows).to_string()
}

fn schema() -> JSONSchema {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/result.schema.json")).unwrap();
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(doc(&["euler", "2,4,4"])["euler"], serde_json::json!(80));
    let out = cellkit(&["solve", "2,2,2", "--format", "table"]);
    assert_eq!(out.code, 0);
    let counts: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with("O_")).map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(counts, ["0", "9", "3", "0"]);
    assert!(out.stdout.contains("mass: 12"));
}

#[test]
fn every_document_validates() {
    let dir = tempfile::tempdir().unwrap();
    let dims = dir.path().join("dims.json");
    fs::write(&dims, doc(&["dims", "2,4,6,8"])["dims"].to_string()).unwrap();
    let diagram = dir.path().join("d.json");
    fs::write(&diagram, r#"{"copies": 2, "of": {"proj": 1, "of": {"base": "OG(1,3)", "generators": [1, 2, 3]}}}"#).unwrap();
    let dims_s = dims.to_str().unwrap();
    let bd = dir.path().join("bd.json");
    fs::write(&bd, bd_dims(&[("101", 2), ("110", 5), ("011", 7)], 4)).unwrap();
    let bd_s = bd.to_str().unwrap();
    let diagram_s = diagram.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["euler", "2,4,4", "--trace"],
        vec!["invariants", "2,4,6"],
        vec!["invariants", "2,2,2,2", "--subgroup", "z1*z3,z2", "--element", "z2", "--character", "(+,-,+)"],
        vec!["characters", "2,4,6,6"],
        vec!["dims", "2,4"],
        vec!["cells", "2,4"],
        vec!["solve", "2,2,2,2"],
        vec!["solve", "3,3,2"],
        vec!["solve", "2,4,6,8", "--dims", dims_s],
        vec!["solve", "1,3,5,7", "--dims", bd_s, "--lie-type", "D"],
        vec!["se", "2,4,6,8,10"],
        vec!["se", "1,3,5", "--lie-type", "B"],
        vec!["possible", "2,4,6"],
        vec!["conjectures", "2,4,6,8"],
        vec!["assemble", "--fixture", "2,2,2"],
        vec!["assemble", diagram_s],
        vec!["verify", "--max-part", "4", "--max-rows", "3"],
    ];
    let s = schema();
    for args in runs {
        let d = doc(&args);
        if let Err(errors) = s.validate(&d) {
            let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
            panic!("{args:?}: {msgs:?}");
        };
    }
}

#[test]
fn schema_rejects_a_malformed_document() {
    let s = schema();
    let bad = serde_json::json!({"schema_version": 1, "command": "euler", "input": {}, "provenance": ["x"]});
    assert!(!s.is_valid(&bad));
}

#[test]
fn exit_codes() {
    assert_eq!(cellkit(&["--help"]).code, 0);
    assert_eq!(cellkit(&["--version"]).code, 0);
    assert_eq!(cellkit(&["frobnicate"]).code, 1);
    assert_eq!(cellkit(&["euler"]).code, 1);
    let odd = cellkit(&["euler", "3,2"]);
    assert_eq!(odd.code, 1);
    assert!(odd.stdout.is_empty());
    let usage = cellkit(&["solve", "1,3,5,7", "--lie-type", "D"]);
    assert_eq!(usage.code, 1);
    assert!(usage.stderr.contains("hint:"), "{}", usage.stderr);
    assert_eq!(cellkit(&["invariants", "2,4,6", "--element", "z9"]).code, 1);
    assert_eq!(cellkit(&["assemble", "--fixture", "2,4"]).code, 1);
}

#[test]
fn negative_result_is_a_contract_violation() {
    // dim(z2z3) < dim(z1z3) forces a negative multiplicity
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, bd_dims(&[("101", 3), ("110", 1), ("011", 1)], 0)).unwrap();
    let out = cellkit(&["solve", "1,3,5,7", "--lie-type", "D", "--dims", path.to_str().unwrap()]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    // a table of the wrong width is a plain usage failure
    let out = cellkit(&["solve", "1,3,5", "--lie-type", "B", "--dims", path.to_str().unwrap()]);
    assert_eq!(out.code, 1, "{}", out.stderr);
}

#[test]
fn deterministic_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("ec.json");
    let c = cache.to_str().unwrap();
    for args in [vec!["solve", "2,4,6,8"], vec!["cells", "2,4,6"], vec!["euler", "4,6,6,8"]] {
        let plain = cellkit(&args);
        let mut with_cache = vec!["--cache", c];
        with_cache.extend_from_slice(&args);
        let first = cellkit(&with_cache);
        let second = cellkit(&with_cache);
        assert_eq!(plain.stdout, first.stdout);
        assert_eq!(first.stdout, second.stdout);
        assert!(second.stderr.is_empty(), "{}", second.stderr);
    }
    assert!(cache.exists());
}

#[test]
fn cache_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ec.json");
    let (empty, warn) = load_cache(&path);
    assert_eq!(empty.len(), 0);
    assert!(warn.is_none());

    let mut cache = EulerCache::new();
    for p in [vec![2, 4], vec![2, 2, 2], vec![2, 4, 6, 8]] {
        cache.ec(&p);
    }
    save_cache(&path, &cache).unwrap();
    let (back, warn) = load_cache(&path);
    assert!(warn.is_none());
    assert_eq!(back.entries(), cache.entries());

    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    let (trunc, warn) = load_cache(&path);
    assert_eq!(trunc.len(), 0);
    assert!(warn.is_some());

    // a well-formed file with a wrong small value is not trusted
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let entries = v["entries"].as_array_mut().unwrap();
    let first = entries.iter_mut().find(|e| e["parts"] == serde_json::json!([2])).unwrap();
    first["euler"] = serde_json::json!(7);
    fs::write(&path, v.to_string()).unwrap();
    let (bad, warn) = load_cache(&path);
    assert_eq!(bad.len(), 0);
    assert!(warn.unwrap().contains("recomputation"));

    // the CLI still answers correctly next to a corrupt cache
    fs::write(&path, "{not json").unwrap();
    let out = cellkit(&["--cache", path.to_str().unwrap(), "euler", "2,2"]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.starts_with("warning:"));
    let d: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(d["euler"], serde_json::json!(4));
    let (healed, warn) = load_cache(&path);
    assert!(warn.is_none());
    assert_eq!(healed.get(&[2, 2]), Some(&BigUint::from(4u32)));
}

#[test]
fn binary_matches_in_process_run() {
    let bin = env!("CARGO_BIN_EXE_cellkit");
    let out = Command::new(bin).args(["euler", "2,4,4"]).env_remove("CELLKIT_CACHE").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), cellkit(&["euler", "2,4,4"]).stdout);
    let bad = Command::new(bin).args(["euler", "5"]).env_remove("CELLKIT_CACHE").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn env_var_selects_cache_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.json");
    let bin = env!("CARGO_BIN_EXE_cellkit");
    let out = Command::new(bin).args(["euler", "2,2,4"]).env("CELLKIT_CACHE", &path).output().unwrap();
    assert!(out.status.success());
    let (c, warn) = load_cache(&path);
    assert!(warn.is_none());
    assert_eq!(c.get(&[2, 2, 4]), Some(&BigUint::from(24u32)));
}
