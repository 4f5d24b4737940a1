// Angles such as 1.0471975512 are typed inputs whose echo is checked verbatim.
#![allow(clippy::approx_constant)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quasispin::cli::OutputDocument;
use serde_json::{json, Value};

const STATES: [&str; 4] = ["up_z", "up_x", "up_y", "unpolarized"];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasispin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn golden_path(state: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("p_table_{state}.json"))
}

fn schema_validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_schema_valid(validator: &jsonschema::Validator, text: &str) {
    let doc: Value = serde_json::from_str(text).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{text}");
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

#[test]
fn golden_documents_are_byte_stable() {
    for state in STATES {
        let golden = std::fs::read(golden_path(state)).unwrap();
        for _ in 0..2 {
            let out = run(&["p-table", "--state", state]);
            assert_eq!(code(&out), 0);
            assert_eq!(out.stdout, golden, "p-table for {state} drifted from its golden file");
        }
    }
}

#[test]
fn documents_round_trip_through_their_parser() {
    for state in STATES {
        let text = std::fs::read_to_string(golden_path(state)).unwrap();
        let doc: OutputDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.to_json(), text);
    }
    let out = run(&["w", "--state", "bloch=0.1,-0.2,0.3", "--grid", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: OutputDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.to_json(), text);
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(golden_path("up_x")).unwrap();
    let good_path = dir.path().join("good.json");
    std::fs::write(&good_path, &good).unwrap();
    let mut perturbed: Value = serde_json::from_str(&good).unwrap();
    perturbed["p_table"][0]["re"] = json!(0.26);
    let bad_path = write_json(dir.path(), "bad.json", &perturbed);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let long_triple = write_json(dir.path(), "long.json", &json!({"w_axes": {"wx_plus": 1.0, "wy_plus": 1.0, "wz_plus": 0.5}}));
    let good_s = good_path.to_str().unwrap();
    let bad_s = bad_path.to_str().unwrap();

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["p-table", "--state", "up_z"], 0),
        (vec!["verify", good_s], 0),
        (vec!["reconstruct", "--mode", "from-p", good_s], 0),
        (vec!["sweep", "--trials", "3", "--seed", "1"], 0),
        (vec!["w", "--state", "up_y", "--grid", "3", "--format", "csv"], 0),
        (vec!["p-table", "--state", "down_z"], 2),
        (vec!["p-table", "--state", "bloch=1,2"], 2),
        (vec!["p-table"], 2),
        (vec!["sweep", "--trials", "0"], 2),
        (vec!["p-table", "--state", "up_z", "--format", "csv"], 2),
        (vec!["w", "--state", "up_z"], 2),
        (vec!["w", "--state", "up_z", "--grid", "0"], 2),
        (vec!["verify", garbage.to_str().unwrap()], 2),
        (vec!["verify", "/nonexistent/input.json"], 2),
        (vec!["reconstruct", "--mode", "from-w-axes", good_s], 2),
        (vec!["frobnicate"], 2),
        (vec!["p-table", "--state", "bloch=0.6,0,0"], 3),
        (vec!["p-table", "--state", "rho=1,0,0,0,0,0,1,0"], 3),
        (vec!["verify", bad_s], 3),
        (vec!["reconstruct", "--mode", "from-p", bad_s], 3),
        (vec!["reconstruct", "--mode", "from-w-axes", long_triple.to_str().unwrap()], 3),
    ];
    for (args, expected) in cases {
        assert_eq!(code(&run(&args)), expected, "quasispin {}", args.join(" "));
    }
}

#[test]
fn failures_still_emit_a_report() {
    let out = run(&["p-table", "--state", "bloch=0.6,0,0"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], json!(false));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let dir = tempfile::tempdir().unwrap();
    let mut perturbed: Value = serde_json::from_str(&std::fs::read_to_string(golden_path("up_z")).unwrap()).unwrap();
    perturbed["p_table"][7]["im"] = json!(0.1);
    let path = write_json(dir.path(), "bad.json", &perturbed);
    let doc = stdout_json(&run(&["verify", path.to_str().unwrap()]));
    assert_eq!(doc["admissibility"]["passed"], json!(false));
    assert!(!doc["errors"].as_array().unwrap().is_empty());
}

#[test]
fn every_document_matches_the_schema() {
    let validator = schema_validator();
    let dir = tempfile::tempdir().unwrap();
    let table = golden_path("up_y");
    let table_s = table.to_str().unwrap();
    let axes = write_json(dir.path(), "axes.json", &json!({"w_axes": {"wx_plus": 0.5, "wy_plus": 1.0, "wz_plus": 0.5}}));
    let mut both: Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    both["w_axes"] = json!({"wx_plus": 0.5, "wy_plus": 1.0, "wz_plus": 0.5});
    let both = write_json(dir.path(), "both.json", &both);
    let generator = write_json(dir.path(), "gen.json", &json!({"generator": "up_x", "j": "1/2"}));
    let invocations: Vec<Vec<&str>> = vec![
        vec!["p-table", "--state", "up_z"],
        vec!["p-table", "--state", "bloch=0.6,0,0"],
        vec!["p-table", "--state", "rho=0.5,0,0,0.5,0,-0.5,0.5,0"],
        vec!["w", "--state", "up_x", "--theta", "0.3", "--phi", "-1", "--psi", "2"],
        vec!["w", "--state", "w_axes=0.5,0.5,0.75", "--grid", "3"],
        vec!["reconstruct", "--mode", "from-p", table_s],
        vec!["reconstruct", "--mode", "from-w-axes", axes.to_str().unwrap()],
        vec!["reconstruct", "--mode", "from-w-integral", generator.to_str().unwrap()],
        vec!["verify", table_s],
        vec!["verify", axes.to_str().unwrap()],
        vec!["verify", both.to_str().unwrap()],
        vec!["sweep", "--trials", "10", "--seed", "3"],
    ];
    for args in invocations {
        let out = run(&args);
        assert_schema_valid(&validator, std::str::from_utf8(&out.stdout).unwrap());
    }
    for state in STATES {
        assert_schema_valid(&validator, &std::fs::read_to_string(golden_path(state)).unwrap());
    }

    // The schema is strict enough to catch malformed documents.
    let good: Value = serde_json::from_str(&std::fs::read_to_string(golden_path("up_z")).unwrap()).unwrap();
    let mut bad = good.clone();
    bad["p_table"][0]["c"] = json!(0);
    assert!(!validator.is_valid(&bad));
    let mut bad = good.clone();
    bad["extra"] = json!(1);
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad["p_table"].as_array_mut().unwrap().pop();
    assert!(!validator.is_valid(&bad));
}

#[test]
fn w_examples() {
    let doc = stdout_json(&run(&["w", "--state", "up_z", "--theta", "1.0471975512", "--phi", "0"]));
    let s = &doc["w_samples"][0];
    assert!((s["w_plus"].as_f64().unwrap() - 0.75).abs() < 1e-10);
    assert_eq!(s["theta"], json!(1.0471975512));

    let doc = stdout_json(&run(&["w", "--state", "up_y", "--theta", "1.5707963268", "--phi", "1.5707963268"]));
    assert!((doc["w_samples"][0]["w_plus"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let doc = stdout_json(&run(&["w", "--state", "unpolarized", "--grid", "4"]));
    let samples = doc["w_samples"].as_array().unwrap();
    assert_eq!(samples.len(), 16);
    assert!(samples.iter().all(|s| s["w_plus"] == json!(0.5)));
}

#[test]
fn csv_grid_export() {
    let out = run(&["w", "--state", "up_x", "--grid", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,phi,w_plus,w_minus"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!((r[2] - 0.5 * (1.0 + r[0].sin() * r[1].cos())).abs() < 1e-14);
        assert!((r[2] + r[3] - 1.0).abs() < 1e-15);
    }
}

#[test]
fn reconstruct_examples() {
    let doc = stdout_json(&run(&["reconstruct", "--mode", "from-p", golden_path("up_z").to_str().unwrap()]));
    assert_eq!(doc["rho"], json!([[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}], [{"re": 0.0, "im": 0.0}, {"re": 0.0, "im": 0.0}]]));

    let dir = tempfile::tempdir().unwrap();
    let axes = write_json(dir.path(), "axes.json", &json!({"w_axes": {"wx_plus": 0.5, "wy_plus": 0.5, "wz_plus": 0.5}}));
    let doc = stdout_json(&run(&["reconstruct", "--mode", "from-w-axes", axes.to_str().unwrap()]));
    let rho = &doc["rho"];
    for (r, c, v) in [(0, 0, 0.5), (0, 1, 0.0), (1, 0, 0.0), (1, 1, 0.5)] {
        assert_eq!(rho[r][c]["re"].as_f64().unwrap(), v);
        assert_eq!(rho[r][c]["im"].as_f64().unwrap(), 0.0);
    }

    let generator = write_json(dir.path(), "gen.json", &json!({"generator": "up_x", "j": 0.5}));
    let out = run(&["reconstruct", "--mode", "from-w-integral", generator.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    for r in 0..2 {
        for c in 0..2 {
            assert!((doc["rho"][r][c]["re"].as_f64().unwrap() - 0.5).abs() <= 1e-10);
            assert!(doc["rho"][r][c]["im"].as_f64().unwrap().abs() <= 1e-10);
        }
    }
    assert_eq!(doc["reconstruction"]["sign_convention"], json!("integer_exponent"));
    assert_eq!(doc["reconstruction"]["literal_phase_factor"], json!(-1.0));
}

#[test]
fn integral_mode_reads_tabulated_spin_one_samples() {
    use quasispin::general::quadrature::gauss_legendre_thetas;
    use quasispin::general::{w_value_j, DensityMatrixJ, HalfInteger};
    use quasispin::EulerAngles;
    use std::num::NonZeroUsize;

    // ρ = |m=1⟩⟨m=1| for j = 1, tabulated on an 8×8 grid.
    let j = HalfInteger::ONE;
    let mut m = nalgebra::DMatrix::zeros(3, 3);
    m[(0, 0)] = num_complex::Complex64::new(1.0, 0.0);
    let rho = DensityMatrixJ::new(j, m, 1e-12).unwrap();
    let n = 8;
    let mut samples = Vec::new();
    for (theta, _) in gauss_legendre_thetas(NonZeroUsize::new(n).unwrap()) {
        for k in 0..n {
            let phi = std::f64::consts::TAU * k as f64 / n as f64;
            let w = w_value_j(&rho, &EulerAngles { phi, theta, psi: 0.0 });
            samples.push(json!({"theta": theta, "phi": phi, "w": w}));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let input = write_json(dir.path(), "samples.json", &json!({"j": 1, "samples": samples}));
    let out = run(&["reconstruct", "--mode", "from-w-integral", input.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    for r in 0..3 {
        for c in 0..3 {
            let expected = if r == 0 && c == 0 { 1.0 } else { 0.0 };
            assert!((doc["rho"][r][c]["re"].as_f64().unwrap() - expected).abs() <= 1e-9);
            assert!(doc["rho"][r][c]["im"].as_f64().unwrap().abs() <= 1e-9);
        }
    }

    // Dropping a node leaves the grid incomplete.
    samples.pop();
    let input = write_json(dir.path(), "partial.json", &json!({"j": 1, "samples": samples}));
    assert_eq!(code(&run(&["reconstruct", "--mode", "from-w-integral", input.to_str().unwrap()])), 2);
}

#[test]
fn verify_matched_pair() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(golden_path("up_x")).unwrap()).unwrap();
    doc["w_axes"] = json!({"wx_plus": 1.0, "wy_plus": 0.5, "wz_plus": 0.5});
    let path = write_json(dir.path(), "pair.json", &doc);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert!(report["consistency"]["max_abs_delta"].as_f64().unwrap() <= 1e-13);

    doc["w_axes"] = json!({"wx_plus": 0.5, "wy_plus": 1.0, "wz_plus": 0.5});
    let path = write_json(dir.path(), "mismatch.json", &doc);
    assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 3);
}

#[test]
fn sweep_is_reproducible_and_tight() {
    let a = run(&["sweep", "--trials", "1", "--seed", "7"]);
    let b = run(&["sweep", "--trials", "1", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sweep", "--trials", "1", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);

    let out = run(&["sweep", "--trials", "1000", "--seed", "42"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    for (name, v) in doc["sweep"]["max_deviations"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() <= 1e-12, "{name} = {v}");
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doc.json");
    let out = run(&["p-table", "--state", "up_z", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(golden_path("up_z")).unwrap());
}
