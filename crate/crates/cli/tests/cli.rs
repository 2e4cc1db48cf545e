mod common;

use common::{fixtures, run};

#[test]
fn goldens_match() {
    let problems = common::check_goldens();
    assert!(problems.is_empty(), "{}", problems.join("\n"));
}

#[test]
fn truncated_json_is_an_input_error_with_location() {
    let r = run(&["validate", "truncated.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    let err = String::from_utf8(r.stderr).unwrap();
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(run(&["validate", "no_such_file.json"]).code, 2);
}

#[test]
fn bad_formula_and_unknown_names_are_input_errors() {
    assert_eq!(run(&["check", "two_player.json", "B[1,All,2](p)"]).code, 2);
    assert_eq!(run(&["check", "two_player.json", "B[9,All,1](p)"]).code, 2);
    assert_eq!(run(&["check", "two_player.json", "zz"]).code, 2);
    assert_eq!(run(&["describe", "two_player.json", "--player", "1", "--type", "nope", "--depth", "1"]).code, 2);
    assert_eq!(run(&["describe", "two_player.json", "--player", "1", "--type", "t1"]).code, 2);
}

#[test]
fn negative_depth_is_rejected() {
    assert_eq!(run(&["describe", "two_player.json", "--depth", "-1"]).code, 2);
}

#[test]
fn quotient_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let r = run(&["quotient", "duplicates.json", "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let written = std::fs::read_to_string(&out).unwrap();
    let expected = std::fs::read_to_string(fixtures().join("duplicates_quotient.json")).unwrap();
    assert_eq!(written, expected);
    // the written file is itself a valid structure
    assert_eq!(run(&["validate", out.to_str().unwrap()]).code, 0);
}

#[test]
fn human_colour_is_opt_in() {
    let plain = run(&["--human", "validate", "two_player.json"]);
    assert_eq!(plain.stdout, b"OK\n");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_cpskit"))
        .args(["--human", "validate", fixtures().join("two_player.json").to_str().unwrap()])
        .env("CPS_COLOR", "1")
        .output()
        .unwrap();
    assert_eq!(out.stdout, b"\x1b[32mOK\x1b[0m\n");
    let json = std::process::Command::new(env!("CARGO_BIN_EXE_cpskit"))
        .args(["validate", fixtures().join("two_player.json").to_str().unwrap()])
        .env("CPS_COLOR", "1")
        .output()
        .unwrap();
    assert!(!json.stdout.contains(&0x1b));
}

#[test]
fn harsanyi_fixtures_are_classified() {
    for i in 1..=5 {
        assert_eq!(run(&["validate", &format!("harsanyi/ok_{i}.json")]).code, 0, "ok_{i}");
        assert_eq!(run(&["validate", &format!("harsanyi/bad_{i}.json")]).code, 1, "bad_{i}");
    }
}
