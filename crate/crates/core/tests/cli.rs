use std::path::Path;
use std::process::Command;

use groupmms::adversarial::footnote_instance;
use groupmms::covering::CoveringDesign;
use groupmms::{Allocation, Instance};

fn groupmms(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_groupmms")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn write_footnote(dir: &Path) -> String {
    let path = dir.join("footnote.json");
    std::fs::write(&path, footnote_instance().to_document()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn mms_of_footnote_agent() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_footnote(dir.path());
    let (code, out, _) = groupmms(&["mms", "--instance", &f, "--agent", "1,1", "--p", "2", "--exact"]);
    assert_eq!((code, out.as_str()), (0, "1/1\n"));
}

#[test]
fn oracle_min_p_of_footnote() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_footnote(dir.path());
    let (code, out, err) = groupmms(&["oracle", "--instance", &f, "--min-p"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("3"));
    Allocation::from_document(lines.next().unwrap()).unwrap().check(3, 2).unwrap();
    assert!(err.starts_with("nodes="));
    let (code, out, _) = groupmms(&["oracle", "--instance", &f, "--p", "2"]);
    assert_eq!((code, out.as_str()), (0, "INFEASIBLE\n"));
}

#[test]
fn two_group_bound() {
    assert_eq!(groupmms(&["bound", "two-group", "--n1", "5", "--n2", "5"]).1, "4\n");
    assert_eq!(groupmms(&["bound", "corollary", "--n1", "2", "--n2", "1"]).1, "3\n");
    assert_eq!(groupmms(&["bound", "ub1", "--sizes", "1,1"]).1, "160\n");
}

#[test]
fn usage_and_domain_errors() {
    let (code, _, err) = groupmms(&["allocate", "--instance", "x.json", "--algo", "ub1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--seed"));
    let (code, _, err) = groupmms(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"));
    let (code, _, err) = groupmms(&["mms", "--instance", "/nonexistent.json", "--agent", "1,1", "--p", "2"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    let (code, _, err) = groupmms(&["bound", "lb1", "--sizes", "63,62"]);
    assert_eq!(code, 1);
    assert!(err.contains("HYPOTHESIS_VIOLATION"));
}

#[test]
fn generated_documents_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_arg = cert.to_string_lossy().into_owned();
    let (code, out, _) = groupmms(&["gen", "--family", "equal2", "--n", "4", "--check", "--cert", &cert_arg]);
    assert_eq!(code, 0);
    let inst = Instance::from_document(&out).unwrap();
    assert_eq!(inst.group_sizes(), vec![4, 4]);
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert["checked"], true);
    assert_eq!(cert["claim"], "no MMS^2 allocation exists");

    let (code, out, err) = groupmms(&["gen", "--family", "lb1", "--sizes", "63,63"]);
    assert_eq!(code, 0);
    assert_eq!(Instance::from_document(&out).unwrap().m(), 4);
    assert!(err.contains("unverified"));

    let (_, out, _) = groupmms(&["design", "--m", "5", "--s", "3", "--t", "2", "--method", "greedy"]);
    assert!(CoveringDesign::from_document(&out).is_ok());
}

#[test]
fn generic_family_with_design_files() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("d.json");
    let (_, out, _) = groupmms(&["design", "--m", "5", "--s", "3", "--t", "2", "--method", "exhaustive"]);
    std::fs::write(&design, out).unwrap();
    let d = design.to_string_lossy().into_owned();
    let args = ["gen", "--family", "generic", "--m", "5", "--p", "3", "--t", "2,2", "--sizes", "4,4", "--design", &d, "--design", &d, "--check"];
    let (code, out, err) = groupmms(&args);
    assert_eq!(code, 0, "{err}");
    assert_eq!(Instance::from_document(&out).unwrap().agent_count(), 8);
    assert!(err.contains("\"checked\": true"));
}

#[test]
fn allocate_then_verify_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let (_, out, _) = groupmms(&["gen", "--family", "uniform", "--sizes", "1,1", "--m", "400", "--seed", "2"]);
    std::fs::write(&inst, out).unwrap();
    let inst = inst.to_string_lossy().into_owned();
    let report = dir.path().join("report.json");
    let (code, out, _) = groupmms(&["allocate", "--instance", &inst, "--algo", "ub1", "--seed", "4", "--c1", "4"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["seed"], 4);
    assert_eq!(doc["rng"], "ChaCha8Rng");
    std::fs::write(&report, &out).unwrap();
    if doc["success"] == true {
        let (code, out, _) = groupmms(&["verify", "--instance", &inst, "--report", &report.to_string_lossy()]);
        assert_eq!(code, 0);
        assert!(out.ends_with("VALID\n"));
    }
}

#[test]
fn fraction_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_footnote(dir.path());
    assert_eq!(groupmms(&["fraction", "--instance", &f, "--p", "2"]).1, "0/1\n");
    assert_eq!(groupmms(&["fraction", "--instance", &f, "--p", "3"]).1, "1/1\n");
    let (code, out, err) = groupmms(&["search", "--instance", &f, "--p", "2", "--trials", "10", "--seed", "1"]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "NOT_FOUND\n", "trials=10\n"));
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_footnote(dir.path());
    let (code, out, err) = groupmms(&["simulate", "--algo", "random-search", "--instance", &f, "--p", "3", "--trials", "1", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "trial,seed,success,failed_condition,ms\n0,0,true,,\n");
    assert!(err.contains("rate=1.0000"));
}
