use std::process::Command as Process;

use serde_json::Value;

use orbitkit::cli::{parse_config, run, Assertion, Command, ConfigError, MapSource};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_orbitkit"))
}

fn report(files: &[(String, String)]) -> Value {
    let (_, text) = files.iter().find(|(n, _)| n == "report.json").expect("report.json");
    serde_json::from_str(text).unwrap()
}

#[test]
fn inline_pieces_and_params() {
    let cfg = parse_config(
        "# tent written out\nsegment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0\ncmd analyze\nparam eps 1/4\nassert transitive\n",
    )
    .unwrap();
    assert!(matches!(cfg.map, MapSource::Inline(_)));
    assert_eq!(cfg.command, Command::Analyze);
    assert_eq!(cfg.assertions, vec![Assertion::Transitive]);
    let out = run(&cfg).unwrap();
    assert_eq!(out.exit_code, 0);
    let r = report(&out.files);
    assert_eq!(r["analyze"]["transitive"]["status"], "certified_yes");
    assert_eq!(r["analyze"]["usc"]["holds"], true);
}

#[test]
fn config_errors_name_the_line_or_field() {
    match parse_config("map builtin tent\nbogus\n") {
        Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    match parse_config("map builtin tent\nparam eps 0\n") {
        Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "eps"),
        other => panic!("{other:?}"),
    }
    assert!(parse_config("map builtin tent\nparam colour red\n").is_err());
}

#[test]
fn failed_assertion_exits_with_two() {
    let out = bin()
        .args(["analyze", "--map", "slide", "--eps", "1/8", "--assert", "transitive"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["analyze"]["transitive"]["status"], "certified_no");
}

#[test]
fn unknown_builtin_exits_with_one() {
    let out = bin().args(["analyze", "--map", "no_such_map"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn list_builtins_is_json() {
    let out = bin().arg("list-builtins").output().unwrap();
    assert!(out.status.success());
    let index: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = index.as_array().unwrap().iter().map(|b| b["name"].as_str().unwrap()).collect();
    for name in ["tent", "flip", "double_tent_f", "slide", "tent_aug_f"] {
        assert!(names.contains(&name), "{name}");
    }
}

#[test]
fn report_writes_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["report", "--map", "flip", "--z", "3/10", "--depth", "4", "--sens-horizon", "8", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["report.json", "map.svg", "orbit_tree.svg", "orbit_cover.svg", "transition.dot", "transition.svg"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(r["orbit"]["levels"][1]["set"]["exact"], "{3/10}|{7/10}");
}
