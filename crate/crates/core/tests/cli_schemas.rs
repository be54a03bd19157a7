use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // Inline the one cross-file reference.
    if let Some(efsm) = v.pointer_mut("/properties/efsm") {
        let mut inner = schema("efsm.schema.json");
        let o = inner.as_object_mut().unwrap();
        for k in ["$schema", "$id", "title", "description"] {
            o.remove(k);
        }
        *efsm = inner;
    }
    v
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let s = schema(schema_name);
    let validator = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:#?}");
}

fn run(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_gameagent")).args(args).arg("--json").output().unwrap();
    assert!(out.status.code().is_some_and(|c| c <= 1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn json_outputs_match_the_schemas() {
    assert_valid("playtest-report.schema.json", &run(&["playtest", "--seed", "1", "--mutant", "buggyMonsterMove"]));
    assert_valid("genlevel.schema.json", &run(&["genlevel", "--seed", "2"]));
    assert_valid("test-suite.schema.json", &run(&["mbt-gen", "--seed", "2", "--budget", "1000", "--strategy", "mulambda"]));
    assert_valid("execution-report.schema.json", &run(&["mbt-run", "--seed", "2", "--budget", "1000"]));
    assert_valid("exploration-report.schema.json", &run(&["explore", "--budget", "40", "--mutant", "crashButton"]));
    assert_valid("exploration-report.schema.json", &run(&["explore", "--game", "dungeon", "--budget", "40"]));
    assert_valid("soak-report.schema.json", &run(&["oracle-soak", "--turns", "300", "--mutant", "buggyMonsterMove"]));
}

#[test]
fn written_files_match_the_schemas() {
    let dir = std::env::temp_dir().join(format!("gameagent-schemas-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stem = dir.join("level");
    let suite = dir.join("suite.json");
    run(&["genlevel", "--seed", "4", "--out", stem.to_str().unwrap()]);
    let efsm: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("efsm.json")).unwrap()).unwrap();
    assert_valid("efsm.schema.json", &efsm);
    run(&["mbt-gen", "--seed", "4", "--budget", "500", "--out", suite.to_str().unwrap()]);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&suite).unwrap()).unwrap();
    assert_valid("test-suite.schema.json", &s);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn a_broken_report_is_rejected() {
    let mut doc = run(&["oracle-soak", "--turns", "50"]);
    doc.as_object_mut().unwrap().remove("games");
    let validator = jsonschema::validator_for(&schema("soak-report.schema.json")).unwrap();
    assert!(!validator.is_valid(&doc));
}
