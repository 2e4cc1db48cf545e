use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Golden cases: file stem, arguments (fixture names resolved against the
/// fixture directory), expected exit code.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_ok", &["validate", "two_player.json"], 0),
    ("validate_ok_human", &["--human", "validate", "two_player.json"], 0),
    ("validate_a3", &["validate", "a3_violation.json"], 1),
    ("validate_a3_human", &["--human", "validate", "a3_violation.json"], 1),
    ("validate_harsanyi", &["validate", "harsanyi/bad_5.json"], 1),
    ("validate_no_harsanyi", &["validate", "--no-harsanyi", "harsanyi/bad_5.json"], 0),
    ("describe_partition", &["describe", "duplicates.json"], 0),
    ("describe_partition_depth0", &["describe", "duplicates.json", "--depth", "0"], 0),
    ("describe_type", &["describe", "duplicates.json", "--player", "1", "--type", "t1", "--depth", "2"], 0),
    ("describe_nature", &["describe", "duplicates.json", "--player", "0", "--type", "s2", "--depth", "3"], 0),
    ("quotient", &["quotient", "duplicates.json"], 0),
    ("quotient_human", &["--human", "quotient", "duplicates.json"], 0),
    ("morphism_ok", &["morphism", "duplicates.json", "duplicates_quotient.json", "duplicates_map.json"], 0),
    ("morphism_bad", &["morphism", "duplicates.json", "duplicates_quotient.json", "bad_map.json", "--depth", "2"], 1),
    ("check_belief", &["check", "two_player.json", "B[1,All,1/2](p)", "--all"], 0),
    ("check_valid", &["check", "two_player.json", "B[2,B1,1](p)"], 0),
    ("check_unsat_human", &["--human", "check", "two_player.json", "p & q"], 1),
    ("induce", &["induce", "props.json"], 0),
    ("approx", &["approx", "duplicates.json", "duplicates_quotient.json", "--depth", "2"], 0),
];

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run(args: &[&str]) -> Run {
    let dir = fixtures();
    let resolved: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { dir.join(a).display().to_string() } else { a.to_string() })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_cpskit"))
        .args(&resolved)
        .env_remove("CPS_COLOR")
        .output()
        .expect("binary runs");
    Run { code: out.status.code().unwrap_or(-1), stdout: out.stdout, stderr: out.stderr }
}

/// Compare every case against its golden file; with `UPDATE_GOLDEN=1`,
/// rewrite the files instead. Returns one message per mismatch.
pub fn check_goldens() -> Vec<String> {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut problems = Vec::new();
    for (name, args, code) in CASES {
        let first = run(args);
        let second = run(args);
        if first.stdout != second.stdout || first.code != second.code {
            problems.push(format!("{name}: output differs between runs"));
        }
        if first.code != *code {
            problems.push(format!(
                "{name}: exit {} (expected {code}): {}",
                first.code,
                String::from_utf8_lossy(&first.stderr)
            ));
        }
        let path = golden_dir().join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &first.stdout).expect("golden directory is writable");
            continue;
        }
        match std::fs::read(&path) {
            Ok(expected) if expected == first.stdout => {}
            Ok(_) => problems.push(format!("{name}: output differs from {}", path.display())),
            Err(e) => problems.push(format!("{name}: {}: {e}", path.display())),
        }
    }
    problems
}
