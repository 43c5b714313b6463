//! End-to-end runs of the binary: exit codes, artifact schemas and
//! byte-for-byte determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_attractor-lab");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("ATTRACTOR_LAB_OUT", dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

/// Validates an artifact against the schema named by its `kind`.
fn assert_valid(path: &Path) -> Value {
    let doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let kind = doc["kind"].as_str().expect("artifact has a kind");
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(schema_dir().join(format!("{kind}.schema.json"))).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{} does not match {kind}: {msgs:?}", path.display());
    }
    doc
}

#[test]
fn every_schema_is_a_valid_schema() {
    let mut count = 0;
    for entry in fs::read_dir(schema_dir()).unwrap() {
        let schema: Value = serde_json::from_str(&fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
        count += 1;
    }
    assert_eq!(count, 9);
}

#[test]
fn hodge_table_is_deterministic_and_keeps_time_out_of_the_artifact() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = run(dir.path(), &["--n", "5", "hodge-table"]);
        assert_eq!(code(&out), 0);
        assert!(String::from_utf8_lossy(&out.stdout).contains("genus 16"));
    }
    let read = |d: &TempDir| fs::read(d.path().join("hodge-table.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    let doc = assert_valid(&a.path().join("hodge-table.json"));
    assert_eq!(doc["tool"]["name"], "attractor-lab");
    assert_eq!(doc["config"]["n"], 5);
    assert!(!String::from_utf8(read(&a)).unwrap().contains("unix_time"));
    let log = fs::read_to_string(a.path().join("attractor-lab.log")).unwrap();
    assert!(log.contains("unix_time=") && log.contains("command=hodge-table exit=0"));
}

#[test]
fn output_dir_flag_overrides_the_environment() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let out = run(env_dir.path(), &["--n", "4", "--output-dir", flag_dir.path().to_str().unwrap(), "shimura-report"]);
    assert_eq!(code(&out), 0);
    assert!(flag_dir.path().join("shimura-report.json").exists());
    assert!(!env_dir.path().join("shimura-report.json").exists());
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["no-such-command"],
        &["hodge-table"],
        &["--n", "1", "hodge-table"],
        &["--n", "3", "--precision", "20", "find-attractors", "--target", "1", "--target", "1"],
        &["--n", "3", "periods", "--free", "0.5,abc", "--free", "0.2,0.1", "--free", "0.7,0.1"],
        &["--n", "3", "periods", "--free", "0.5,0.1"],
        &["--n", "3", "monodromy", "--word", "1 9"],
        &["--threads", "zero", "--n", "3", "hodge-table"],
    ];
    for args in cases {
        let out = run(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let diag = assert_valid(&dir.path().join("diagnostic.json"));
    assert_eq!(diag["result"]["exit_code"], 2);
}

#[test]
fn a_configuration_that_is_no_attractor_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["--n", "3", "certify"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let diag = assert_valid(&dir.path().join("diagnostic.json"));
    assert_eq!(diag["result"]["error"], "not-certified");
}

#[test]
fn periods_and_schwarz_artifacts_validate() {
    let dir = TempDir::new().unwrap();
    let free = ["--free", "0.3,0.2", "--free", "0.5,-0.1", "--free", "0.8,0.15"];
    let mut args = vec!["--precision", "30", "periods", "--complement"];
    args.extend(free);
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let pm = assert_valid(&dir.path().join("period-matrix.json"));
    assert_eq!(pm["result"]["rows"].as_array().unwrap().len(), 4);
    let csv = fs::read_to_string(dir.path().join("period-matrix.csv")).unwrap();
    assert!(csv.starts_with("# tool: attractor-lab"));
    assert!(csv.lines().any(|l| l.starts_with("row,kind,a,b,cycle")));

    let mut args = vec!["--precision", "30", "schwarz", "--jacobian"];
    args.extend(free);
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let s = assert_valid(&dir.path().join("schwarz.json"));
    assert_eq!(s["result"]["jacobian"]["rank"], 4);
}

#[test]
fn configuration_file_round_trips_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 2, "free": [["0.5", "0"]]}"#).unwrap();
    let out = run(dir.path(), &["--precision", "40", "certify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = assert_valid(&dir.path().join("certificate.json"));
    assert_eq!(cert["result"]["status"], "certified");
    assert_eq!(cert["result"]["field_order"], 4);
}

#[test]
fn density_scan_certificates_survive_escalation() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["--n", "2", "--precision", "40", "--seed", "3", "density-scan", "--targets", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = assert_valid(&dir.path().join("density-scan.json"));
    assert_eq!(report["result"]["outcomes"].as_array().unwrap().len(), 3);
    let summary = fs::read_to_string(dir.path().join("density-summary.csv")).unwrap();
    assert_eq!(summary.lines().filter(|l| l.starts_with('#')).count(), 3);

    let cert = dir.path().join("certificates/cert-000.json");
    assert_valid(&cert);
    let out = run(dir.path(), &["certify", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let check = assert_valid(&dir.path().join("certify.json"));
    assert_eq!(check["result"]["holds"], true);
    assert_eq!(check["result"]["recheck_precision"], 60);

    // Same seed, same bytes.
    let again = TempDir::new().unwrap();
    run(again.path(), &["--n", "2", "--precision", "40", "--seed", "3", "density-scan", "--targets", "3"]);
    let read = |d: &Path| fs::read(d.join("density-scan.json")).unwrap();
    assert_eq!(read(dir.path()), read(again.path()));
}

#[test]
fn find_attractors_and_monodromy_artifacts_validate() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["--n", "2", "--precision", "40", "find-attractors", "--target", "1", "--target", "0,1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = assert_valid(&dir.path().join("certificate.json"));
    assert_eq!(cert["result"]["status"], "certified");

    let out = run(dir.path(), &["--n", "2", "--precision", "40", "monodromy", "--word", "1 -2", "--generators"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = assert_valid(&dir.path().join("monodromy.json"));
    assert_eq!(m["result"]["hermitian_form"]["signature"], serde_json::json!([1, 1]));
    assert_eq!(m["result"]["matrices"].as_array().unwrap().len(), 3);
    assert_eq!(m["result"]["braid_relations"][0]["exact"], true);
}

#[test]
fn shimura_report_over_a_range() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["shimura-report", "--n-max", "7"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("n=5 dim_M=7 dim_Sh=22 min_codim=10 unlikely=yes"));
    let r = assert_valid(&dir.path().join("shimura-report.json"));
    assert_eq!(r["result"]["reports"].as_array().unwrap().len(), 6);
    assert_eq!(r["result"]["counterexample_dimensions"], serde_json::json!([7, 11]));
}
