use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn permclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn queries() {
    let out = permclass(&["classes", "prod(S(4),S(4))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "25");

    assert_eq!(stdout(&permclass(&["pn", "12"])).trim(), "77");
    assert_eq!(stdout(&permclass(&["order", "M12"])).trim(), "95040");
    assert_eq!(
        stdout(&permclass(&["bound", "chain", "--indices", "2,12"])).trim(),
        "315392"
    );
    assert_eq!(
        stdout(&permclass(&["blocks", "D(8)"])).trim(),
        "{1,3} {2,4}"
    );
    assert_eq!(stdout(&permclass(&["blocks", "S(5)"])).trim(), "primitive");

    let out = permclass(&["classes", "A(5)", "--json"]);
    assert!(stdout(&out).contains("\"classes\":\"5\""));
}

#[test]
fn generator_files() {
    let path = scratch("klein.gens", "degree=4\n(1,2)(3,4)\n(1,3)(2,4)\n");
    let arg = format!("@{}", path.display());
    assert_eq!(stdout(&permclass(&["order", &arg])).trim(), "4");
    assert_eq!(stdout(&permclass(&["classes", &arg])).trim(), "4");
}

#[test]
fn parse_errors_exit_two_with_caret() {
    let out = permclass(&["classes", "S(4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("  S(4\n     ^ column 4"), "{err}");

    assert_eq!(permclass(&["classes"]).status.code(), Some(2));
    assert_eq!(permclass(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        permclass(&["bound", "main", "--k", "5", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    let bad = scratch("bad.manifest", "ClassCount | x | S(4)\n");
    let out = permclass(&["verify", "claims", "--manifest", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_failures_exit_one() {
    let out = permclass(&["bound", "main", "--k", "5", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("lhs=125 relation=<= rhs=125 holds=true"));
    assert_eq!(
        permclass(&["bound", "main", "--k", "6", "--n", "4"])
            .status
            .code(),
        Some(1)
    );

    let wrong = scratch("wrong.manifest", "ClassCount | k(A12) | A(12) | 44\n");
    let out = permclass(&["verify", "claims", "--manifest", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("expected=44 computed=43"));
}

#[test]
fn limits_exit_three() {
    let out = permclass(&["classes", "prod(S(12),C(2))"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        permclass(&["classes", "D(8)", "--limit", "4"])
            .status
            .code(),
        Some(3)
    );

    let big = scratch("big.manifest", "ClassCount | big | prod(S(12),C(2)) | 1\n");
    let path = big.to_str().unwrap();
    assert_eq!(
        permclass(&["verify", "claims", "--manifest", path])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        permclass(&["verify", "claims", "--manifest", path, "--strict"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn builtin_claims() {
    let out = permclass(&["verify", "claims"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("claim ")).count(), 14);
    assert!(text.ends_with("summary claims=14 verdicts=0 failures=0 skipped=0 status=pass\n"));

    let empty = scratch("empty.manifest", "# nothing\n");
    let out = permclass(&["verify", "claims", "--manifest", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("summary claims=0"));
}

#[test]
fn claims_report_is_deterministic() {
    let args = ["verify", "claims", "--json", "--seed", "7"];
    let a = permclass(&args);
    let b = permclass(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("wall_ms"));
    assert!(stdout(&permclass(&["verify", "claims", "--timings"])).contains("wall_ms="));
}

#[test]
fn smallest_sweep() {
    let out = permclass(&["verify", "sweep", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for subject in ["S(4)", "A(4)", "C(4)", "D(8)"] {
        let line = format!("verdict subject={subject} claim_id=main-bound");
        assert!(text.contains(&line), "missing {subject}");
    }
    assert!(text
        .contains("verdict subject=\"gens{degree=4;(1,2)(3,4);(1,3)(2,4)}\" claim_id=main-bound"));
    assert_eq!(
        permclass(&["verify", "sweep", "--max-degree", "3"])
            .status
            .code(),
        Some(2)
    );
}
