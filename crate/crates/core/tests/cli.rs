use std::process::Command;

use fibentry::cli::{run, EXIT_BREACH, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fibentry").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn zp_table_and_json() {
    let (code, out, _) = call(&["zp", "11"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Z(p)       10"));
    let (_, out, _) = call(&["zp", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["z"], 10);
    assert_eq!(v["alpha_order"], 5);
    assert_eq!(v["case"], "odd");
}

#[test]
fn zeta_commands() {
    assert!(call(&["zeta", "20"]).1.starts_with("5/144"));
    let (_, out, _) = call(&["zeta-joint", "3", "2", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["num"].as_i64(), v["den"].as_i64()), (Some(2), Some(81)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["zp", "21"]).0, EXIT_USAGE);
    assert_eq!(call(&["preimage", "11", "2", "-1"]).0, EXIT_USAGE);
    assert_eq!(call(&["zeta-joint", "3", "1", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["density", "--x", "1000"]).0, EXIT_USAGE);
    assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
}

#[test]
fn density_breach_exits_one() {
    let (code, out, err) = call(&["density", "--x", "1000", "--m", "2", "--tolerance", "0", "--format", "csv"]);
    assert_eq!(code, EXIT_BREACH);
    assert!(err.contains("scanning primes up to 1000"));
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "section,x,pi_x,m,q,i,j,count,observed,predicted_num,predicted_den,abs_error,scope_flag"
    );
    assert!(lines.next().unwrap().starts_with("entry,1000,168,2,,,,111,"));
}

#[test]
fn density_json_marks_scope() {
    let (code, out, _) = call(&["density", "--x", "50000", "--q", "2,3", "--imax", "1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for cell in v["joint"].as_array().unwrap() {
        let expected = if cell["q"] == 2 { "outside_proof_scope" } else { "in_scope" };
        assert_eq!(cell["scope_flag"], expected);
    }
}

#[test]
fn affine_verify_reports_printed_mismatch_without_failing() {
    let (code, out, _) = call(&["affine-verify", "--ten", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("MISMATCH-as-printed"));
    let (code, out, _) = call(&["affine-verify", "--ell", "3", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn binary_honours_thread_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_fibentry"))
        .args(["density", "--x", "20000", "--m", "3"])
        .env("FIBENTRY_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 worker(s)"));
}
