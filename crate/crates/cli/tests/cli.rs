use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_arithmirror"));
    c.env_remove("ARITHMIRROR_ORDER");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.json"))
}

fn assert_valid(schema: &str, doc: &Value) {
    let text = std::fs::read_to_string(schema_path(schema)).unwrap();
    let schema_json: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema_json).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn json_of(args: &[&str], schema: &str) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(schema, &v);
    v
}

#[test]
fn classify_u_plus_minus2() {
    let v = json_of(&["reflective", "classify", "--lattice", "U+<-2>"], "reflectivity_verdict");
    assert_eq!(v["kind"], "elliptic");
    assert_eq!(v["chamber"]["roots"].as_array().unwrap().len(), 3);
    let rank2 = json_of(&["reflective", "classify", "--lattice", "U"], "reflectivity_verdict");
    assert_eq!(rank2["kind"], "parabolic");
    assert_eq!(rank2["root_count"]["count"], 2);
}

#[test]
fn delta1_verify_reports_equal() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["delta1", "verify", "--order", "26", "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("equal"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_valid("delta1_report", &v);
    assert_eq!(v["verdict"]["kind"], "equal");
}

#[test]
fn lattice_info_of_the_main_lattice() {
    let v = json_of(&["lattice", "info", "--lattice", "2U(12)+<-2>"], "lattice_info");
    assert_eq!(v["rank"], 5);
    assert_eq!(v["signature"]["n_plus"], 2);
    assert_eq!(v["signature"]["n_minus"], 3);
    assert_eq!(v["determinant"].as_i64(), Some(-2 * 12i64.pow(4)));
    let text = stdout(&run(&["lattice", "info", "--lattice", "2U(12)+<-2>", "--format", "text"]));
    assert!(text.contains("signature   (2,3)"));
}

#[test]
fn lattice_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.json");
    std::fs::write(&path, r#"{"gram": [[0, 1, 0], [1, 0, 0], [0, 0, -2]]}"#).unwrap();
    let v = json_of(&["lattice", "info", "--lattice-file", path.to_str().unwrap()], "lattice_info");
    assert_eq!(v["determinant"].as_i64(), Some(2));
    let q = json_of(
        &["lattice", "quotient", "--lattice-file", path.to_str().unwrap(), "--cusp", "1,0,0"],
        "lattice_quotient",
    );
    assert_eq!(q["quotient"]["gram"], serde_json::json!([[-2]]));
}

#[test]
fn phi03_formats_and_order_env() {
    let v = json_of(&["phi03", "--order", "1"], "phi03");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["l"], -1);
    let csv = stdout(&run(&["phi03", "--order", "1", "--format", "csv", "--no-header"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# units: q^n r^l");
    assert_eq!(lines[1], "n,l,coeff");
    assert_eq!(lines[2], "0,-1,1");
    let from_env = bin().args(["phi03"]).env("ARITHMIRROR_ORDER", "1").output().unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&from_env.stdout).unwrap()["order"], 1);
    let flag_wins = bin().args(["phi03", "--order", "2"]).env("ARITHMIRROR_ORDER", "1").output().unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&flag_wins.stdout).unwrap()["order"], 2);
    let q = json_of(&["phi03", "--order", "4", "--route", "quotient", "--no-header"], "phi03");
    let p = json_of(&["phi03", "--order", "4", "--no-header"], "phi03");
    assert_eq!(q, p);
}

#[test]
fn delta1_dump_has_unit_header() {
    let v = json_of(&["delta1", "dump", "--order", "8", "--side", "product"], "delta1_series");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 10);
    let csv = stdout(&run(&["delta1", "dump", "--order", "2", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# arithmirror "));
    assert_eq!(lines[1], "# units: q^(n/6) r^(l/2) s^(m/6)");
    assert_eq!(&lines[2..], ["n,l,m,coeff", "1,-1,1,-1", "1,1,1,1"]);
}

#[test]
fn vinberg_json_and_dot() {
    let v = json_of(&["vinberg", "run", "--lattice", "U+<-2>", "--v0", "1,1,0"], "chamber_report");
    assert_eq!(v["status"]["kind"], "closed_finite_area");
    assert_eq!(v["root_gram"], serde_json::json!([[-2, 0, 1], [0, -2, 2], [1, 2, -2]]));
    let dot = stdout(&run(&["vinberg", "run", "--lattice", "U+<-2>", "--v0", "1,1,0", "--format", "dot"]));
    assert!(dot.starts_with("graph coxeter {"));
    let none = json_of(&["vinberg", "run", "--lattice", "U(12)+<-6>", "--max-height", "6"], "chamber_report");
    assert_eq!(none["status"]["kind"], "no_roots");
}

#[test]
fn mirror_commands() {
    let v = json_of(
        &["mirror", "quotient", "--lattice", "2U+<-6>", "--cusp", "1,0,0,0,0", "--expected", "U+<-6>"],
        "mirror_pair",
    );
    assert_eq!(v["verified"], true);
    assert_eq!(v["s_signature"], "(1,2)");
    let fams = json_of(&["mirror", "verify-families"], "family_verification");
    assert_eq!(fams["all_verified"], true);
    assert_eq!(fams["families"].as_array().unwrap().len(), 16);
    let wrong = run(&["mirror", "quotient", "--lattice", "2U+<-6>", "--cusp", "1,0,0,0,0", "--expected", "U+<-4>"]);
    assert_eq!(wrong.status.code(), Some(1));
    let not_isotropic = run(&["mirror", "quotient", "--lattice", "2U+<-6>", "--cusp", "1,1,0,0,0"]);
    assert_eq!(not_isotropic.status.code(), Some(2));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let bad = run(&["lattice", "info", "--lattice", "U(0)"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
    assert_eq!(run(&["lattice", "info"]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "info", "--lattice", "U", "--lattice-file", "x.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["reflective", "classify", "--lattice", "U+<-2>"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");
    let o = run(&["--out", out.to_str().unwrap(), "delta1", "dump", "--order", "14"]);
    assert!(o.stdout.is_empty());
    let a = std::fs::read(&out).unwrap();
    run(&["--out", out.to_str().unwrap(), "delta1", "dump", "--order", "14"]);
    assert_eq!(a, std::fs::read(&out).unwrap());
    let plain: Value = serde_json::from_slice(&run(&["--no-header", "phi03", "--order", "1"]).stdout).unwrap();
    assert!(plain.get("generator").is_none());
}

#[test]
fn schemas_reject_altered_documents() {
    let mut v = json_of(&["reflective", "classify", "--lattice", "U+<-2>"], "reflectivity_verdict");
    v["unexpected"] = Value::Bool(true);
    let text = std::fs::read_to_string(schema_path("reflectivity_verdict")).unwrap();
    let validator = jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(!validator.is_valid(&v));
    let mut p = json_of(&["phi03", "--order", "1"], "phi03");
    p["rows"][0]["coeff"] = Value::String("one".into());
    let text = std::fs::read_to_string(schema_path("phi03")).unwrap();
    let validator = jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(!validator.is_valid(&p));
}
