//! End-to-end tests spawning the built binary: one process per case,
//! asserting on exit codes and the JSON documents on stdout/stderr.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const EPR: &str = r#"{"n":2,"generators":["+XX","+ZZ"]}"#;
const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn lulc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lulc"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn json_ok(args: &[&str]) -> Value {
    let out = lulc(args);
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn json_err(args: &[&str]) -> Value {
    let out = lulc(args);
    assert_eq!(
        out.status.code(),
        Some(1),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON document")
}

fn pipe_through(args: &[&str], input: &[u8]) -> Value {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lulc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(input)
        .expect("child accepts the document");
    let out = child.wait_with_output().expect("child exits");
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn amp(value: &Value, index: usize) -> (f64, f64) {
    let pair = &value["amps"][index];
    (
        pair[0].as_f64().expect("real part"),
        pair[1].as_f64().expect("imaginary part"),
    )
}

fn assert_amp(value: &Value, index: usize, re: f64, im: f64) {
    let (r, i) = amp(value, index);
    assert!(
        (r - re).abs() < 1e-12 && (i - im).abs() < 1e-12,
        "amplitude {index} is ({r}, {i}), expected ({re}, {im})"
    );
}

#[test]
fn validate_reports_the_group_shape() {
    let v = json_ok(&["validate", r#"{"n":3,"generators":["+ZZI","+ZIZ"]}"#]);
    assert_eq!(v["n"], 3);
    assert_eq!(v["k"], 2);
    assert_eq!(v["maximal"], false);
    assert_eq!(v["generators"], json!(["+ZZI", "+ZIZ"]));
}

#[test]
fn validate_rejects_anticommuting_generators() {
    let e = json_err(&["validate", r#"{"n":2,"generators":["+XX","+ZI"]}"#]);
    assert_eq!(e["error"]["kind"], "input");
    let message = e["error"]["message"].as_str().expect("message string");
    assert!(message.contains("commute"), "message: {message}");
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = lulc(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bell_pair_amplitudes() {
    let v = json_ok(&["synth", EPR]);
    assert_eq!(v["n"], 2);
    assert_amp(&v, 0, INV_SQRT2, 0.0);
    assert_amp(&v, 1, 0.0, 0.0);
    assert_amp(&v, 2, 0.0, 0.0);
    assert_amp(&v, 3, INV_SQRT2, 0.0);
}

#[test]
fn synth_output_pipes_into_extract() {
    let state = lulc(&["synth", EPR]);
    assert!(state.status.success());
    let v = pipe_through(&["extract", "-"], &state.stdout);
    assert_eq!(v["S"], json!(["11"]));
    assert_eq!(v["t"], "00");
    assert_eq!(v["mu"], "0");
    assert_eq!(v["theta"], json!(["0"]));
    assert_eq!(v["lambda"], "0");
}

#[test]
fn standardize_reports_the_graph_state_form() {
    let half = 0.5;
    let doc = json!({
        "n": 2,
        "amps": [[half, 0.0], [half, 0.0], [half, 0.0], [-half, 0.0]],
    })
    .to_string();
    let v = json_ok(&["standardize", &doc]);
    assert_eq!(v["standard_form"]["S"], json!(["10", "01"]));
    assert_eq!(v["standard_form"]["mu"], "00");
    assert_eq!(v["q_tilde"], json!({"theta": ["01", "00"], "lambda": "00"}));
    assert_eq!(v["record"], json!({"t": "00", "d": "00"}));
    assert_amp(&v["state"], 3, -half, 0.0);
}

#[test]
fn purify_freezes_the_ghz_construction() {
    let v = json_ok(&["purify", r#"{"n":2,"generators":["+ZZ"]}"#]);
    assert_eq!(v["z_list"], json!(["10"]));
    assert_eq!(v["h_list"], json!(["+XX"]));
    assert_eq!(v["big_state"]["n"], 3);
    assert_eq!(
        v["big_state"]["generators"],
        json!(["+ZZI", "+ZIZ", "+XXX"])
    );
}

#[test]
fn semiclifford_classifies_the_eighth_root_diagonal() {
    let r = INV_SQRT2;
    let doc = json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [r, r]]]).to_string();
    let v = json_ok(&["semiclifford", &doc]);
    assert_eq!(v["semi"], true);
    assert_eq!(v["clifford"], false);
    assert_eq!(v["fixed_axis"], "Z");
    assert!(v["decomposition"].is_object());
}

#[test]
fn semiclifford_reports_hadamard_as_clifford() {
    let r = INV_SQRT2;
    let doc = json!([[[r, 0.0], [r, 0.0]], [[r, 0.0], [-r, 0.0]]]).to_string();
    let v = json_ok(&["semiclifford", &doc]);
    assert_eq!(v["semi"], true);
    assert_eq!(v["clifford"], true);
}

#[test]
fn lc_oracle_finds_the_bit_flip() {
    let zero = r#"{"n":1,"amps":[[1.0,0.0],[0.0,0.0]]}"#;
    let one = r#"{"n":1,"amps":[[0.0,0.0],[1.0,0.0]]}"#;
    let v = json_ok(&["lc-oracle", zero, one]);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["elements"].as_array().expect("element list").len(), 1);
}

#[test]
fn dlu_check_relates_phase_rotated_states() {
    let r = INV_SQRT2;
    let plus = json!({"n": 1, "amps": [[r, 0.0], [r, 0.0]]}).to_string();
    let rotated = json!({"n": 1, "amps": [[r, 0.0], [0.0, r]]}).to_string();
    let v = json_ok(&["dlu-check", &plus, &rotated]);
    assert_eq!(v["related"], true);
    assert_eq!(v["reason"], "ok");
    assert_eq!(v["complex_rep"], true);
    assert!(v["clifford_rep"]["b"].is_array());
}

#[test]
fn dlu_check_rejects_mismatched_sizes() {
    let one = r#"{"n":1,"amps":[[1.0,0.0],[0.0,0.0]]}"#;
    let two = r#"{"n":2,"amps":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#;
    let e = json_err(&["dlu-check", one, two]);
    assert_eq!(e["error"]["kind"], "input");
}

#[test]
fn quadrep_solves_the_rank_two_sign_pattern() {
    let v = json_ok(&[
        "quadrep",
        "--S",
        r#"["110","011"]"#,
        "--f",
        "1,-1,1,1",
        "--level",
        "2",
    ]);
    assert_eq!(v["representable"], true);
    assert_eq!(v["assignment"]["level"], 2);
    let b: Vec<u64> = v["assignment"]["b"]
        .as_array()
        .expect("assignment entries")
        .iter()
        .map(|x| x.as_u64().expect("phase numerator"))
        .collect();
    assert_eq!(b.len(), 3);
    // b must hit sign -1 exactly on the first basis row: the congruence is
    // sum of b over the support of s, equal to 2 mod 4 iff the sign is -1.
    let rows = [[1u64, 1, 0], [0, 1, 1]];
    let targets = [(0b01, 2u64), (0b10, 0), (0b11, 0)];
    for (mask, rhs) in targets {
        let mut combo = [0u64; 3];
        for (i, row) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (cj, sj) in combo.iter_mut().zip(row) {
                    *cj ^= sj;
                }
            }
        }
        let lhs: u64 = b.iter().zip(combo).map(|(bj, cj)| bj * cj).sum();
        assert_eq!(lhs % 4, rhs, "combination mask {mask:b}");
    }

    let v1 = json_ok(&[
        "quadrep",
        "--S",
        r#"["110","011"]"#,
        "--f",
        "1,-1,1,1",
        "--level",
        "1",
    ]);
    assert_eq!(v1["representable"], false);
    assert!(v1["assignment"].is_null());
}

#[test]
fn quadrep_complex_mode_decides_both_ways() {
    let refused = json_ok(&[
        "quadrep",
        "--S",
        r#"["10","01"]"#,
        "--theta",
        r#"["01","00"]"#,
        "--lambda",
        "00",
        "--complex",
    ]);
    assert_eq!(refused["representable"], false);
    assert!(refused["witness"].is_null());

    let found = json_ok(&[
        "quadrep",
        "--S",
        r#"["11"]"#,
        "--theta",
        r#"["01","00"]"#,
        "--lambda",
        "00",
        "--complex",
    ]);
    assert_eq!(found["representable"], true);
    assert_eq!(found["witness"].as_array().expect("phase list").len(), 2);
}

#[test]
fn search_scans_all_rank_profiles() {
    let v = json_ok(&["search", "--n", "3", "--exhaustive"]);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["subspaces_examined"], 16);
    assert_eq!(v["forms_examined"], 135);
    assert_eq!(v["hits"], json!([]));
    assert_eq!(v["unconfirmed"], 0);
}

#[test]
fn search_partitions_cover_the_stream() {
    let mut forms = 0;
    for slice in ["0/2", "1/2"] {
        let v = json_ok(&["search", "--n", "2", "--exhaustive", "--partition", slice]);
        assert_eq!(v["hits"], json!([]));
        forms += v["forms_examined"].as_u64().expect("form count");
    }
    assert_eq!(forms, 15);
}

#[test]
fn output_flag_writes_the_document() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("out.json");
    let out = lulc(&[
        "validate",
        EPR,
        "--output",
        path.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("output file");
    let v: Value = serde_json::from_str(&text).expect("file holds JSON");
    assert_eq!(v["n"], 2);
    assert_eq!(v["maximal"], true);
}

#[test]
fn path_and_inline_inputs_agree() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("group.json");
    std::fs::write(&path, EPR).expect("fixture file");
    let from_path = json_ok(&["validate", path.to_str().expect("utf8 path")]);
    let from_inline = json_ok(&["validate", EPR]);
    assert_eq!(from_path, from_inline);
}
