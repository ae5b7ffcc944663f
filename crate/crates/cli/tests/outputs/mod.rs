//! Command outputs pinned against `tests/golden`. The registry reports are
//! pinned by the criteria that compute them.

use crate::common::*;

fn check(name: &str, args: &[&str], code: i32) {
    let r = run(args);
    assert_eq!(r.code, code, "{name}: {}", r.stderr);
    assert_golden(name, &r.stdout);
}

#[test]
fn list() {
    check("list", &["list"], 0);
}

#[test]
fn theta_series() {
    for (n, m) in [(36, 3), (37, 3), (41, 4), (43, 4), (44, 4)] {
        check(&format!("theta_{n}"), &["theta", "--n", &n.to_string(), "--min-norm", &m.to_string()], 0);
    }
}

#[test]
fn truncation_from_environment() {
    let env = run_with_env(&["theta", "--n", "36", "--min-norm", "3"], &[("LATSHADOW_TRUNCATION", "8")]);
    assert_eq!(env.code, 0);
    assert_eq!(env.value("TRUNCATION"), Some("8"));
    assert_golden("theta_36_t8", &env.stdout);
    let flag = run_with_env(&["theta", "--n", "36", "--min-norm", "3", "--truncation", "8"], &[("LATSHADOW_TRUNCATION", "4")]);
    assert_eq!(flag.stdout, env.stdout);
    let bad = run_with_env(&["theta", "--n", "36", "--min-norm", "3"], &[("LATSHADOW_TRUNCATION", "many")]);
    assert_eq!(bad.code, 3);
}

#[test]
fn wesolve() {
    let support36 = "16,20,24,28,32,36";
    check("wesolve_36", &["wesolve", "--n", "36", "--dim", "6", "--support", support36, "--dual-zeros", "1,2", "--forbid-all-ones"], 0);
    let support37 = "4,8,12,16,20,24,28,32,36";
    check("wesolve_37", &["wesolve", "--n", "37", "--dim", "6", "--support", support37, "--dual-zeros", "1,2"], 0);
}

#[test]
fn enum_census() {
    let e8 = data("e8.lat");
    check("enum_e8", &["enum", "--file", &e8, "--bound", "4"], 0);
    let threaded = run(&["--threads", "3", "enum", "--file", &e8, "--bound", "4"]);
    assert_golden("enum_e8", &threaded.stdout);
    check("enum_z3_shadow", &["enum", "--file", &data("z3.lat"), "--bound", "11/4", "--coset", "shadow"], 0);
}

#[test]
fn verify_code_files() {
    check("verify_octacode", &["verify", &data("octacode.zkcode")], 0);
    check("verify_klein_sum", &["verify", &data("klein_sum.zkcode")], 0);
}

#[test]
fn corrupted_matrix_names_first_violation() {
    let r = run(&["verify", &data("c36_corrupted.z4std")]);
    assert_eq!(r.code, 2);
    assert_eq!(r.value("FIRST_MISMATCH"), Some("SELF_DUAL expected yes got no"));
    assert_golden("verify_c36_corrupted", &r.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enum", "--file", &data("malformed.lat"), "--bound", "2"]).code, 3);
    assert_eq!(run(&["enum", "--file", &data("e8.lat"), "--bound", "two"]).code, 3);
    assert_eq!(run(&["enum", "--file", &data("absent.lat"), "--bound", "2"]).code, 3);
    assert_eq!(run(&["verify", "C99"]).code, 3);
    assert_eq!(run(&["theta", "--n", "36"]).code, 3);
    assert_eq!(run(&["--node-budget", "100", "verify", "C36"]).code, 4);
    assert_eq!(run(&["wesolve", "--n", "36", "--dim", "6", "--support", "16,20,24,28,32,36", "--budget", "1"]).code, 4);
    assert_eq!(run(&["--help"]).code, 0);
}
