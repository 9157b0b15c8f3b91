//! End-to-end checks of the `seqlab` binary: exit-code contract, output
//! shapes, and determinism of seeded runs.

use std::process::{Command, Output};

fn seqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn generate_single_member_is_one_line() {
    let out = seqlab(&["generate", "--family", "omega", "--p", "5", "--n", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let parsed: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(parsed["p"], 5);
    let values = parsed["values"].as_array().unwrap();
    assert_eq!(values.len(), 5);
    // (0, 1, i, -i, -1)
    let expect = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (-1.0, 0.0)];
    for (v, (re, im)) in values.iter().zip(expect) {
        assert!((v[0].as_f64().unwrap() - re).abs() < 1e-12);
        assert!((v[1].as_f64().unwrap() - im).abs() < 1e-12);
    }
}

#[test]
fn generate_family_has_header_plus_members() {
    let out = seqlab(&["generate", "--family", "omega", "--p", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 76);
    let header: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(header["family"], "omega");
    assert_eq!(header["size"], 75);
    assert_eq!(header["generator"], 2);
}

#[test]
fn generate_rejects_composite_modulus() {
    let out = seqlab(&["generate", "--family", "omega", "--p", "4"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime"));
}

#[test]
fn verify_omega_passes_with_exit_zero() {
    let out = seqlab(&[
        "verify", "--family", "omega", "--p", "5", "--checks", "ambiguity,ft", "--pairs",
        "exhaustive",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema"], "seqlab-report/1");
    assert_eq!(report["pass"], true);
}

#[test]
fn verify_theorem2_matches_all_pairs() {
    let out = seqlab(&["verify", "--theorem2", "--p", "5"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pairs"], 45);
    assert_eq!(report["pass"], true);
}

#[test]
fn verify_flags_bound_violation_with_exit_one() {
    let out = seqlab(&[
        "verify", "--family", "heisenberg", "--p", "5", "--auto-bound", "2sqrtp",
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let auto = &report["checks"][0];
    assert_eq!(auto["pass"], false);
    assert!((auto["witness"]["magnitude"].as_f64().unwrap() - 5.0).abs() < 1e-6);
}

#[test]
fn verify_sampled_requires_seed() {
    let out = seqlab(&[
        "verify", "--family", "omega", "--p", "5", "--pairs", "sampled",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn ambiguity_surface_csv_shape() {
    let out = seqlab(&["ambiguity", "--p", "5", "--family", "omega", "--n", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "t,w,re,im,abs");
    let origin: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((origin - 4.0).abs() < 1e-9);
}

#[test]
fn ambiguity_chu_zero_correlation_column() {
    let out = seqlab(&["ambiguity", "--p", "5", "--family", "chu", "--y", "1"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (t, w): (u64, u64) = (fields[0].parse().unwrap(), fields[1].parse().unwrap());
        if w == 0 && t != 0 {
            let abs: f64 = fields[4].parse().unwrap();
            assert!(abs < 1e-9, "t={t} has |A|={abs}");
        }
    }
}

#[test]
fn ambiguity_rejects_mismatched_periods() {
    let out = seqlab(&[
        "ambiguity", "--p", "5", "--family", "omega", "--n", "0", "--family2", "chu", "--p2",
        "7", "--y2", "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn spectrum_member_csv_and_family_report() {
    let out = seqlab(&["spectrum", "--p", "5", "--family", "chu", "--y", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines().skip(1) {
        let abs: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((abs - 1.0).abs() < 1e-9);
    }
    let out = seqlab(&[
        "spectrum", "--p", "5", "--family", "omega", "--ft-bound", "2",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn compare_csv_has_header_and_four_rows() {
    let out = seqlab(&["compare", "--p", "7", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "family,size,max_auto,max_cross,max_ft");
    assert!(lines[1].starts_with("chu,6,"));
    assert!(lines[4].starts_with("omega,245,"));
}

#[test]
fn compare_rejects_small_modulus() {
    let out = seqlab(&["compare", "--p", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn weil_checks_pass() {
    for check in ["theorem2", "torus", "cosets"] {
        let out = seqlab(&["weil-check", "--p", "5", "--check", check]);
        assert_eq!(code(&out), 0, "{check}");
    }
    let out = seqlab(&[
        "weil-check", "--p", "5", "--check", "intertwining", "--trials", "10", "--seed", "3",
    ]);
    assert_eq!(code(&out), 0);
    let out = seqlab(&[
        "weil-check", "--p", "5", "--check", "homomorphism", "--trials", "10", "--seed", "3",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "verify", "--family", "omega", "--p", "11", "--checks", "cross", "--pairs", "sampled",
        "--samples", "500", "--seed", "99",
    ];
    let first = seqlab(&args);
    let second = seqlab(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    // Worker count must not change results either.
    let mut one_thread = vec!["--threads", "1"];
    one_thread.extend_from_slice(&args);
    let third = seqlab(&one_thread);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn unknown_family_is_usage_error() {
    let out = seqlab(&["generate", "--family", "zadoff", "--p", "5"]);
    assert_eq!(code(&out), 2);
}
