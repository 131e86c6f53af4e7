//! Black-box tests of the `edim` binary: exit codes, output contracts,
//! and byte-for-byte determinism of the JSON renderings.

use std::process::Command;

fn edim(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_edim"))
        .args(args)
        .output()
        .expect("the binary must run");
    (
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
        out.status.code().expect("no signal exit"),
    )
}

#[test]
fn ed_text_examples() {
    let (out, _, code) = edim(&["ed", "--family", "PSL", "--n", "2", "--q", "5", "--l", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("group: PSL(2, F_5)"));
    assert!(out.contains("value: 1"));

    let (out, _, code) = edim(&["ed", "--family", "Sp", "--n", "4", "--q", "3", "--l", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("value: 1"));

    // The quadratic-residue gate for the even prime in a linear family.
    let (out, err, code) = edim(&["ed", "--family", "GL", "--n", "3", "--q", "3", "--l", "2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("unsupported: "));
    assert!(err.contains("only q = 1 mod 4 is covered"));
}

#[test]
fn ed_defining_characteristic_is_unsupported_not_usage() {
    let (_, err, code) = edim(&["ed", "--family", "GL", "--n", "2", "--q", "5", "--l", "5"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("unsupported: "));
}

#[test]
fn ed_json_payload() {
    let (out, _, code) = edim(&[
        "ed", "--family", "PSL", "--n", "2", "--q", "5", "--l", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "ed");
    assert_eq!(v["family"], "PSL");
    assert_eq!(v["n"], 2);
    assert_eq!(v["q"], 5);
    assert_eq!(v["l"], 3);
    assert_eq!(v["value"], 1);
    assert!(v["case_label"].is_string());
}

#[test]
fn ed_csv_has_header_and_one_row() {
    let (out, _, code) = edim(&[
        "ed", "--family", "GL", "--n", "4", "--q", "5", "--l", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("family,n,"));
    assert!(lines[1].starts_with("GL,4,"));
}

#[test]
fn sylow_reports() {
    let (out, _, code) = edim(&["sylow", "--family", "GL", "--n", "8", "--q", "2", "--l", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("d: 2"));
    assert!(out.contains("s: 1"));
    assert!(out.contains("n0: 4"));
    assert!(out.contains("blocks: [3, 1]"));
    assert!(out.contains("predicted center rank: 2"));
    assert!(out.contains("sylow order exponent: 5"));

    let (out, _, code) = edim(&["sylow", "--family", "U", "--n", "4", "--q", "2", "--l", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("d: 4"));
    assert!(out.contains("F_q^2"));

    // A one-dimensional torus renders as a plain cyclic group.
    let (out, _, code) = edim(&["sylow", "--family", "GL", "--n", "1", "--q", "7", "--l", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("abelian: Z/3"));
    assert!(out.contains("generator 1: [[2]]"));
}

#[test]
fn sylow_check_forms_verifies_generators() {
    let (out, _, code) = edim(&[
        "sylow", "--family", "Sp", "--n", "4", "--q", "3", "--l", "5", "--check-forms",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("form check: all generators satisfy the defining equations"));
}

#[test]
fn sylow_quotient_without_matrix_model_reports_reason() {
    // PSL_2(F_5) at l = 2 quotients away central l-part; the report still
    // succeeds but explains why no faithful matrix model is attached.
    let (out, _, code) = edim(&["sylow", "--family", "PSL", "--n", "2", "--q", "5", "--l", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("matrix model unavailable:"));
}

#[test]
fn verify_small_grid_all_match() {
    let (out, _, code) = edim(&[
        "verify", "--family", "GL", "--n", "4", "--q", "4,5,7", "--l", "2,3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["command"], "verify");
    assert_eq!(v["mismatches_outside_flagged"], 0);
    assert_eq!(v["flagged_mismatches"], 0);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 16);
    assert!(records.iter().all(|r| r["status"] == "match"));
}

#[test]
fn verify_empty_grid_is_ok() {
    let (out, _, code) = edim(&["verify", "--n", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["grid"].as_array().unwrap().len(), 0);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_flagged_edge_passes_unless_strict() {
    let args = ["verify", "--family", "SL", "--n", "3", "--q", "7", "--l", "3"];
    let (out, _, code) = edim(&args);
    assert_eq!(code, 0, "a flagged degenerate tuple does not fail by default");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["flagged_mismatches"], 1);
    assert_eq!(v["mismatches_outside_flagged"], 0);
    let flagged = v["flagged_degenerate"].as_array().unwrap();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["tuple"]["n"], 3);

    let mut strict: Vec<&str> = args.to_vec();
    strict.push("--strict");
    let (_, _, code) = edim(&strict);
    assert_eq!(code, 3, "--strict promotes flagged mismatches to failures");
}

#[test]
fn verify_text_format_marks_edges() {
    let (out, _, code) = edim(&[
        "verify", "--family", "SL", "--n", "3", "--q", "7", "--l", "3", "--format", "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("mismatch (flagged degenerate)"));
    assert!(out.contains("flagged degenerate tuples"));
    assert!(out.contains("tuples: 3; mismatches outside flagged: 0; flagged mismatches: 1"));
}

#[test]
fn json_output_is_byte_deterministic() {
    let args = [
        "verify", "--family", "GL,SL", "--n", "3", "--q", "4,7", "--l", "3", "--format", "json",
    ];
    let (first, _, code) = edim(&args);
    assert_eq!(code, 0);
    let (second, _, _) = edim(&args);
    assert_eq!(first.as_bytes(), second.as_bytes());

    let args = ["ed", "--family", "U", "--n", "3", "--q", "4", "--l", "5", "--format", "json"];
    let (first, _, _) = edim(&args);
    let (second, _, _) = edim(&args);
    assert_eq!(first.as_bytes(), second.as_bytes());
}

#[test]
fn table_fails_only_on_the_inconsistent_row() {
    let (out, _, code) = edim(&["table"]);
    assert_eq!(code, 3);
    assert_eq!(out.matches(" FAIL").count(), 1);
    assert_eq!(out.matches(" pass").count(), 13);
    assert!(out.contains("14 rows, 1 failed"));
    // The failing row is the l = 7 entry whose degree product contradicts
    // the tabulated identification.
    let fail_line = out.lines().find(|l| l.contains("FAIL")).unwrap();
    assert!(fail_line.contains("7"));
    assert!(out.contains("note [PSL(2, F_5) at l = 7]"));
}

#[test]
fn table_json_counts() {
    let (out, _, code) = edim(&["table", "--format", "json"]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 14);
    assert_eq!(v["failed_rows"], 1);
    assert_eq!(v["all_pass"], false);
}

#[test]
fn usage_errors_exit_one() {
    // Non-prime-power q.
    let (_, err, code) = edim(&["ed", "--family", "GL", "--n", "2", "--q", "6", "--l", "3"]);
    assert_eq!(code, 1, "{err}");
    // Unknown family token.
    let (_, _, code) = edim(&["ed", "--family", "XX", "--n", "2", "--q", "5", "--l", "3"]);
    assert_eq!(code, 1);
    // Even-dimensional orthogonal group needs a type sign.
    let (_, err, code) = edim(&["ed", "--family", "O", "--n", "4", "--q", "3", "--l", "3"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "));
    // Inconsistent field description.
    let (_, _, code) = edim(&[
        "ed", "--family", "GL", "--n", "2", "--q", "9", "--p", "2", "--l", "5",
    ]);
    assert_eq!(code, 1);
    // Missing required flag (clap-level).
    let (_, _, code) = edim(&["ed", "--family", "GL", "--n", "2", "--q", "5"]);
    assert_eq!(code, 1);
    // Zero budget.
    let (_, _, code) = edim(&["verify", "--budget", "0"]);
    assert_eq!(code, 1);
    // The oracle only covers the linear families.
    let (_, err, code) = edim(&["verify", "--family", "Sp"]);
    assert_eq!(code, 1);
    assert!(err.contains("GL, SL, and PSL"));
}

#[test]
fn help_and_version_exit_zero() {
    let (_, _, code) = edim(&["--help"]);
    assert_eq!(code, 0);
    let (out, _, code) = edim(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.contains("edim"));
}
