use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

/// `(golden name, arguments, expected exit code)` from `golden/cases.txt`.
fn cases() -> Vec<(String, Vec<String>, i32)> {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cases.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split('|').map(str::trim).collect();
            (
                parts[0].to_string(),
                parts[1].split_whitespace().map(String::from).collect(),
                parts[2].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args, code) in cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let golden = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert!(out.stdout == golden, "{name}: output differs from {}", path.display());
    }
}

#[test]
fn repeated_runs_are_identical() {
    let a = run(&["t-truncate", "s1_resolution.json", "--n", "0"]);
    let b = run(&["t-truncate", "s1_resolution.json", "--n", "0"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_holds_the_json_report() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("report.json");
    let out = run(&["validate", "three_term_bad.json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let written = std::fs::read_to_string(&path).unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.ends_with(&written));
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["schema"], "cert-v1");
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["location"], "(0,2)");
    assert_eq!(v["checks"][0]["residual"][0], "1");
}

#[test]
fn t_truncate_reports_heart_dimension_vectors() {
    let out = run(&["t-truncate", "s1_resolution.json", "--n", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("  leq_heart = [0,0]\n"));
    assert!(text.contains("  geq_heart = [1,0]\n"));
}

#[test]
fn input_errors_exit_with_2() {
    for args in [
        vec!["validate", "bad_schema.json"],
        vec!["validate", "missing.json"],
        vec!["validate", "arrow.json", "--field", "Fp:5"],
        vec!["validate", "arrow.json", "--field", "Fp:6"],
        vec!["cone", "arrow.json"],
        vec!["t-truncate", "arrow.json", "--n", "0"],
        vec!["iso-check", "identity_arrow.json", "--field", "nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unknown_verb_is_rejected_before_reading_files() {
    let out = run(&["frobnicate", "does-not-exist.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("frobnicate"));
    assert!(!err.contains("does-not-exist"));
}

#[test]
fn matching_field_flag_is_accepted() {
    let out = run(&["validate", "arrow.json", "--field", "Q"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn shipped_algebra_is_upper_triangular_a2() {
    use twistlab::exactlin::Field;
    use twistlab::formats::{algebra_from_json, parse_json};
    use twistlab::tstruct::upper_triangular_a2;
    let text = std::fs::read_to_string(fixtures().join("a2.json")).unwrap();
    let (alg, gens) = algebra_from_json(&parse_json(&text).unwrap(), None).unwrap();
    assert_eq!(alg, upper_triangular_a2(Field::Rational));
    assert!(gens.is_empty());
}
