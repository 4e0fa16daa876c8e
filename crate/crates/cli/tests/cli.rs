//! End-to-end runs of each subcommand on the example documents.

#[path = "../../core/tests/support/bar_oracle.rs"]
mod bar_oracle;

use std::path::PathBuf;
use std::process::Command;

use massey_core::ainfty::AkAlgebra;
use massey_core::braces::gerstenhaber_square;
use massey_core::complexes::hochschild_complex;
use massey_core::operad::Cochain;
use massey_core::{fixtures, DegreeWindow, FieldSpec, Scalar};
use massey_cli::{run, Output};
use serde_json::Value;

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn massey(args: &[&str]) -> Output {
    let mut argv = vec!["massey"];
    argv.extend_from_slice(args);
    run(argv, &mut std::io::empty())
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", out.stdout, out.stderr))
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut argv = vec!["massey"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

#[test]
fn verify_exterior_is_valid() {
    let out = massey(&["verify", &example("exterior.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["algebra"]["valid"], true);
    assert_eq!(r["sign_audit"]["status"], "pass");
    assert_eq!(r["status"], "ok");
}

#[test]
fn verify_reports_the_first_failing_equation() {
    let out = massey(&["verify", &example("exterior_perturbed.json")]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["algebra"]["first_failure"], 3);
    // the n = 3 residual is d(m3), computed here through the differential matrix
    let a = fixtures::exterior(FieldSpec::Rational);
    let s = AkAlgebra::new(&a, 4).unwrap();
    let one = Scalar::from_i64(FieldSpec::Rational, 1);
    let m3 = Cochain::from_labels(s.handle(), 3, -1, &[(&["e1", "e0", "e0"], "e0", one)]).unwrap();
    let hc = s.hochschild_window(DegreeWindow::new(2, 5, -1, -1).unwrap()).unwrap();
    let expected = hc.apply_d(&m3).unwrap();
    assert!(!expected.is_zero());
    assert_eq!(r["result"]["algebra"]["residuals"][1]["value"], expected.to_string());
}

#[test]
fn missing_label_names_it_and_exits_2() {
    let text = std::fs::read_to_string(example("exterior.json")).unwrap().replace("[\"e1\", \"e0\", \"e1\", 1]", "[\"e1\", \"e0\", \"e9\", 1]");
    let out = with_stdin(&["verify", "-"], &text);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("$.algebra.products[2][2]") && out.stderr.contains("\"e9\""), "{}", out.stderr);
}

#[test]
fn cohomology_of_exterior_matches_the_bar_oracle() {
    let out = massey(&["cohomology", &example("exterior.json"), "--window", "0:4,-3:1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let bar = bar_oracle::BarAlgebra::plain(&fixtures::exterior(FieldSpec::Rational));
    let mut checked = 0;
    for row in json_of(&out)["result"]["dims"].as_array().unwrap() {
        let (p, q) = (row["p"].as_i64().unwrap(), row["q"].as_i64().unwrap());
        if p <= 3 {
            assert_eq!(row["cohomology"].as_u64().unwrap() as usize, bar_oracle::cohomology_dim(&bar, p as usize, q), "({p},{q})");
            checked += 1;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn cohomology_of_zero_algebra_is_zero() {
    let doc = r#"{"field": "Q", "spaces": {"Z": []}, "algebra": {"space": "Z", "products": []}}"#;
    let out = with_stdin(&["cohomology", "-", "--window", "0:2,-1:1", "--emit", "json"], doc);
    assert_eq!(out.code, 0, "{}", out.stderr);
    for row in json_of(&out)["result"]["dims"].as_array().unwrap() {
        assert_eq!(row["component"], 0);
    }
}

#[test]
fn sparse_cohomology_vanishes_off_the_lattice() {
    let out = massey(&["cohomology", &example("dual_numbers_sparse.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rows = json_of(&out)["result"]["dims"].as_array().unwrap().clone();
    assert!(rows.iter().any(|r| r["component"].as_u64().unwrap() > 0));
    for row in rows.iter().filter(|r| r["q"].as_i64().unwrap().rem_euclid(2) == 1) {
        assert_eq!(row["component"], 0, "{row}");
    }
}

#[test]
fn cohomology_without_a_window_is_an_input_error() {
    let out = massey(&["cohomology", &example("truncated_cubic.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--window"), "{}", out.stderr);
}

#[test]
fn dg_obstruction_vanishes() {
    let out = massey(&["obstruct", &example("exterior.json"), "--k", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["class_vanishes"], true);
    assert_eq!(r["result"]["bidegree"], serde_json::json!([4, -1]));
}

#[test]
fn blocking_obstruction_is_the_square_of_m3() {
    let out = massey(&["obstruct", &example("blocking_square_zero.json")]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["class_vanishes"], false);
    assert_eq!(r["result"]["bidegree"], serde_json::json!([5, -2]));
    let a = fixtures::square_zero(FieldSpec::Rational, &[("x", -1), ("y", 2)]);
    let s = AkAlgebra::new(&a, 4).unwrap();
    let one = Scalar::from_i64(FieldSpec::Rational, 1);
    let m3 = Cochain::from_labels(s.handle(), 3, -1, &[(&["x", "x", "y"], "x", one)]).unwrap();
    assert_eq!(r["result"]["cocycle"], gerstenhaber_square(&m3).unwrap().to_string());
}

#[test]
fn obstruction_below_arity_three_is_an_input_error() {
    let out = massey(&["obstruct", &example("exterior.json"), "--k", "2"]);
    assert_eq!(out.code, 2, "{}", out.stdout);
    assert!(out.stderr.starts_with("error: k:"), "{}", out.stderr);
}

#[test]
fn bimodule_obstruction_agrees_with_delta() {
    let out = massey(&["obstruct", &example("two_sided_module.json")]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["context"], "bimodule");
    assert_eq!(r["result"]["delta_agrees"], true);
}

#[test]
fn dg_extension_reaches_the_target() {
    let out = massey(&["extend", &example("exterior.json"), "--k", "3", "--target-arity", "5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["reached"], true);
    assert_eq!(r["result"]["final_k"], 5);
    assert_eq!(r["result"]["verifies"], true);
}

#[test]
fn truncated_cubic_extends_to_seven() {
    let out = massey(&["extend", &example("truncated_cubic.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["final_k"], 7);
    assert_eq!(r["result"]["trace"].as_array().unwrap().len(), 4);
}

#[test]
fn sparse_extension_pads_odd_steps() {
    let out = massey(&["extend", &example("dual_numbers_sparse.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["parameters"]["sparse_d"], 2);
    let padded: Vec<u64> = r["result"]["trace"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["padded"] == true)
        .map(|t| t["from_arity"].as_u64().unwrap())
        .collect();
    assert_eq!(padded, [3, 5, 7]);
}

#[test]
fn blocked_extension_exits_1() {
    let out = massey(&["extend", &example("blocking_square_zero.json"), "--k", "3", "--target-arity", "6"]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["blocked"]["truncation_arity"], 4);
    assert_eq!(r["result"]["reached"], false);
}

#[test]
fn extending_an_invalid_structure_fails() {
    let out = massey(&["extend", &example("exterior_perturbed.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("n = 3"), "{}", out.stderr);
    assert_eq!(json_of(&out)["result"], Value::Null);
}

#[test]
fn dg_massey_class_is_zero() {
    let out = massey(&["massey", &example("exterior.json"), "--window", "2:6,-3:0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["class"]["zero"], true);
    assert_eq!(r["result"]["complex"]["d_squared_defects"], serde_json::json!([]));
}

#[test]
fn massey_fixture_class_is_nonzero_and_certified() {
    let out = massey(&["massey", &example("massey_square_zero.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["class"]["zero"], false);
    assert_eq!(r["result"]["class"]["bidegree"], serde_json::json!([3, -1]));
    assert_eq!(r["result"]["complex"]["uses_square"], false);
    assert!(!r["result"]["complex"]["dims"].as_array().unwrap().is_empty());
}

#[test]
fn massey_complex_is_refused_with_a_witness() {
    let out = massey(&["massey", &example("blocking_square_zero.json"), "--window", "2:6,-3:0"]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["complex"]["refused"]["bidegree"], serde_json::json!([5, -2]));
    assert!(out.stderr.contains("refused"));
}

#[test]
fn massey_length_offset_zero_is_rejected() {
    let out = massey(&["massey", &example("massey_square_zero.json"), "--d", "0"]);
    assert_eq!(out.code, 2);
}

#[test]
fn ground_field_satisfies_kadeishvili() {
    let out = massey(&["check", &example("ground.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["verdict"], "satisfied");
    assert_eq!(r["result"]["tail"], "vanishes beyond n = 0");
}

#[test]
fn truncated_cubic_check_matches_the_oracle() {
    let out = massey(&["check", &example("truncated_cubic.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = json_of(&out);
    assert_eq!(r["result"]["verdict"], "satisfied");
    let bar = bar_oracle::BarAlgebra::plain(&fixtures::truncated_polynomial(FieldSpec::Rational, 3, -1));
    for row in r["result"]["dims"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap() as usize;
        assert_eq!(row["dim"].as_u64().unwrap() as usize, bar_oracle::cohomology_dim(&bar, n + 2, -(n as i64)));
    }
}

#[test]
fn exterior_pair_check_is_violated() {
    let out = massey(&["check", &example("exterior_diagonal.json"), "--theorem", "kadeishvili-bimodule", "--range", "2"]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["result"]["verdict"], "violated");
    assert_eq!(r["result"]["violated_at"]["n"], 1);
    // Ext^{2,-1} through the independent bar model of the square-zero extension
    let a = fixtures::exterior(FieldSpec::Rational);
    let hc = hochschild_complex(&a, DegreeWindow::new(1, 3, -1, -1).unwrap()).unwrap();
    let bar = bar_oracle::BarAlgebra::square_zero(&a, &fixtures::diagonal(&a));
    let hhe = bar_oracle::cohomology_dim(&bar, 2, -1);
    let hh = hc.cohomology_dim(2, -1).unwrap();
    assert!(hhe <= hh + r["result"]["violated_at"]["dim"].as_u64().unwrap() as usize);
}

#[test]
fn module_theorem_without_module_is_an_input_error() {
    let out = massey(&["check", &example("exterior.json"), "--theorem", "massey-pair"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--theorem"), "{}", out.stderr);
}

#[test]
fn stdin_and_file_give_the_same_digest() {
    let path = example("exterior.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let a = json_of(&massey(&["verify", &path]));
    let b = json_of(&with_stdin(&["verify", "-"], &text));
    assert_eq!(a, b);
    assert_eq!(a["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn field_flag_rereads_the_document() {
    let out = massey(&["cohomology", &example("exterior.json"), "--field", "Fp:2", "--window", "0:2,-1:0"]);
    assert_eq!(out.code, 0);
    assert_eq!(json_of(&out)["field"], "Fp:2");
    let f2 = massey(&["cohomology", &example("exterior_f2.json"), "--window", "0:2,-1:0"]);
    assert_eq!(json_of(&out)["result"], json_of(&f2)["result"]);
}

#[test]
fn table_output_lists_the_header() {
    let out = massey(&["verify", &example("ground.json"), "--emit", "table"]);
    assert_eq!(out.code, 0);
    for key in ["command: verify", "field: Q", "input_sha256: ", "sign_audit.status: pass", "status: ok"] {
        assert!(out.stdout.contains(key), "{key}\n{}", out.stdout);
    }
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_massey");
    let ok = Command::new(bin).args(["verify", &example("exterior.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());
    let bad = Command::new(bin).args(["verify", &example("does_not_exist.json")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    let usage = Command::new(bin).args(["verify"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn schema_lists_the_accepted_keys() {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "input.schema.json"].iter().collect();
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    let top: Vec<&str> = schema["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(top, ["algebra", "bimodule", "field", "higher_ops", "spaces", "task"]);
    let task: Vec<&str> = schema["properties"]["task"]["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(task, ["context", "d", "k", "range", "sparse_d", "target_arity", "theorem", "window"]);
    let tags: Vec<&str> = schema["properties"]["task"]["properties"]["theorem"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let ours: Vec<&str> = massey_core::criteria::Theorem::ALL.iter().map(|t| t.tag()).collect();
    assert_eq!(tags, ours);
}
