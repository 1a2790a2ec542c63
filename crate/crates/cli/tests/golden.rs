//! Golden-file tests: each case runs the binary on shipped fixtures and
//! compares exit code, stdout, stderr and the written report byte for byte
//! against `tests/golden/<case>.txt`.
//!
//! Regenerate with `FIDMAP_BLESS=1 cargo test -p fidmap-cli --test golden`.

mod common;

use common::{golden_path, transcript};

fn check(case: &str, args: &[&str]) {
    let actual = transcript(args);
    let path = golden_path(case);
    if std::env::var_os("FIDMAP_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert!(actual == expected, "{case} differs from golden\n--- expected\n{expected}\n--- actual\n{actual}");
    assert_eq!(transcript(args), actual, "{case} is not deterministic");
}

#[test]
fn fidelity_diagonal_pair() {
    check("fidelity_diag", &["fidelity", "--a", "diag_05_05.json", "--b", "diag_09_01.json"]);
}

#[test]
fn fidelity_digits() {
    check(
        "fidelity_digits",
        &["fidelity", "--a", "diag_05_05.json", "--b", "pure_plus_i.json", "--digits", "16"],
    );
}

#[test]
fn partial_fidelity() {
    check(
        "fidelity_partial",
        &["fidelity", "--a", "diag_05_05.json", "--b", "diag_09_01.json", "--m", "1"],
    );
}

#[test]
fn fidelity_dimension_mismatch() {
    check("fidelity_mismatch", &["fidelity", "--a", "diag_05_05.json", "--b", "diag_3.json"]);
}

#[test]
fn fidelity_bad_inputs() {
    check("fidelity_not_hermitian", &["fidelity", "--a", "not_hermitian.json", "--b", "diag_05_05.json"]);
    check("fidelity_not_positive", &["fidelity", "--a", "not_positive.json", "--b", "diag_05_05.json"]);
    check("fidelity_malformed", &["fidelity", "--a", "malformed.json", "--b", "diag_05_05.json"]);
    check("fidelity_bad_m", &["fidelity", "--a", "diag_05_05.json", "--b", "diag_09_01.json", "--m", "3"]);
}

#[test]
fn reconstruct_transpose() {
    check("reconstruct_transpose", &["reconstruct", "--map", "transpose_d2.json", "--out", "{out}"]);
}

#[test]
fn reconstruct_seeded_symmetries() {
    check(
        "reconstruct_unitary_d3",
        &["reconstruct", "--map", "unitary_d3.json", "--trials", "16", "--seed", "3", "--out", "{out}"],
    );
    check(
        "reconstruct_antiunitary_d4",
        &["reconstruct", "--map", "antiunitary_d4.json", "--tol", "1e-9", "--out", "{out}"],
    );
    check("reconstruct_hadamard", &["reconstruct", "--map", "hadamard_d2.json", "--out", "{out}"]);
}

#[test]
fn reconstruct_rejected_map() {
    check(
        "reconstruct_depolarizing",
        &["reconstruct", "--map", "depolarizing_p05_d2.json", "--out", "{out}"],
    );
}

#[test]
fn classify_depolarizing() {
    check(
        "classify_depolarizing",
        &["classify", "--map", "depolarizing_p05_d2.json", "--trials", "100", "--seed", "1", "--out", "{out}"],
    );
}

#[test]
fn classify_other_maps() {
    check(
        "classify_mix",
        &["classify", "--map", "mix_p05_d2.json", "--trials", "50", "--seed", "2", "--out", "{out}"],
    );
    check(
        "classify_dephase",
        &["classify", "--map", "dephase_d2.json", "--trials", "20", "--seed", "3", "--out", "{out}"],
    );
    check(
        "classify_transpose",
        &["classify", "--map", "transpose_d2.json", "--trials", "50", "--seed", "4", "--out", "{out}"],
    );
}

#[test]
fn classify_bad_specs() {
    check(
        "classify_bad_kind",
        &["classify", "--map", "bad_kind.json", "--trials", "10", "--seed", "1", "--out", "{out}"],
    );
    check(
        "classify_bad_param",
        &["classify", "--map", "bad_param.json", "--trials", "10", "--seed", "1", "--out", "{out}"],
    );
    check(
        "classify_missing_file",
        &["classify", "--map", "absent.json", "--trials", "10", "--seed", "1", "--out", "{out}"],
    );
}

#[test]
fn verify_panel() {
    check("verify_d2", &["verify", "--dim", "2", "--trials", "200", "--seed", "42", "--out", "{out}"]);
    check("verify_d3_stdout_only", &["verify", "--dim", "3", "--trials", "50", "--seed", "5"]);
}

#[test]
fn verify_rejects_dimension_one() {
    check("verify_d1", &["verify", "--dim", "1", "--trials", "10", "--seed", "1"]);
}

#[test]
fn usage_errors_exit_one() {
    check("usage_missing_arg", &["classify", "--map", "transpose_d2.json"]);
}

#[test]
fn matrix_fixtures_round_trip_bit_exactly() {
    use fidmap_core::io::MatrixFile;
    for name in ["diag_05_05.json", "diag_09_01.json", "diag_3.json", "pure_plus_i.json"] {
        let text = std::fs::read_to_string(common::fixtures().join(name)).unwrap();
        let file = MatrixFile::from_json(&text).unwrap();
        let back = MatrixFile::from_hermitian(&file.to_hermitian().unwrap());
        assert_eq!(back, file, "{name}");
        assert_eq!(MatrixFile::from_json(&back.to_json()).unwrap(), file, "{name}");
    }
}
