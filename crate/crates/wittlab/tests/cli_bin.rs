//! End-to-end checks of the installed binary: output bytes and exit codes.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wittlab"))
        .args(args)
        .env("WITTLAB_CACHE", std::env::temp_dir().join("wittlab-cli-test"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_codes() {
    // 0: success
    assert_eq!(run(&["witt-poly", "--n", "4"]).0, 0);
    // 1: verification failure
    assert_eq!(run(&["dold", "1,2,3"]).0, 1);
    // 2: usage error
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["witt-poly", "--n", "x"]).0, 2);
    // 3: integrality failure
    assert_eq!(run(&["unghost", "--ring", "Z", "--nest", "1,2", "0,1"]).0, 3);
}

#[test]
fn spec_examples() {
    let (code, stdout, _) = run(&["dold", "1,3,4,7,11"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("PASS (ghost-realizable over Z up to n=5"));

    let (code, stdout, _) = run(&["struct-poly", "--kind", "add", "--flavor", "big", "--nest", "1,2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("X1 + Y1"));
    assert!(stdout.contains("X1*Y1"));

    let (code, stdout, _) = run(&["verify", "r-polys", "--max", "6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("OK: r_1..r_6 match reference"));
}

#[test]
fn byte_identical_reruns() {
    let a = run(&["symm", "convert", "--from", "s", "--to", "m", "3,1"]);
    let b = run(&["symm", "convert", "--from", "s", "--to", "m", "3,1"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn json_mode() {
    let (code, stdout, _) = run(&["witt-poly", "--n", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert!(v.is_array());
}
