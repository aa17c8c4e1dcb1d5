mod common;

use std::path::Path;
use std::process::{Command, Output};

use a4lift::cli::certificate::ChainCertificate;
use a4lift::cli::{pipeline_certificate, GlobalOptions, PipelineConfig};
use common::*;
use serde_json::Value;

fn a4lift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a4lift")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classify_examples() {
    let o = a4lift(&["classify", "t^-5 + t^-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A4"));
    let v = json(&a4lift(&["classify", "t^-3", "--json"]));
    assert_eq!(v["input"]["galois_type"], "C6");
    let v = json(&a4lift(&["classify", "t^-2", "--json"]));
    assert_eq!(v["input"]["standard_form"], "t^-1");
    assert_eq!(v["input"]["galois_type"], "A4");
    assert_eq!(v["input"]["break"], "1");
    let v = json(&a4lift(&["standard-form", "t^-4 + t^-1", "--json"]));
    assert_eq!(v["break"], "0");
}

#[test]
fn exit_codes() {
    assert_eq!(a4lift(&["pipeline", "t^-7"]).status.code(), Some(0));
    // not A4: a failed check
    assert_eq!(a4lift(&["pipeline", "t^-9"]).status.code(), Some(1));
    assert_eq!(a4lift(&["deform", "t^-5"]).status.code(), Some(1));
    // usage and parse errors
    assert_eq!(a4lift(&["classify", "t^-5 +"]).status.code(), Some(2));
    assert_eq!(a4lift(&["classify", "t^-5", "--field-degree", "7"]).status.code(), Some(2));
    assert_eq!(a4lift(&["pipeline", "t^-7", "--padic-precision", "3"]).status.code(), Some(2));
    assert_eq!(a4lift(&["deform", "t^-7", "--mu", "3:1"]).status.code(), Some(2));
    assert_eq!(a4lift(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(a4lift(&["lift-base", "t^-5", "--ram-index", "8"]).status.code(), Some(2));
}

#[test]
fn precision_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    // F = 1 + pi^35 X: Phi has leading coefficient of valuation 7, so the
    // leading coefficient of Phi' vanishes modulo 2^8
    let f = write("F.json", r#"[[0, [[1]]], [1, [[], [], [], [], [], [8]]]]"#);
    let h = write("H.json", r#"[[0, [[1]]]]"#);
    let a = write("A.json", r#"[[1, [[1]]]]"#);
    let o = a4lift(&["verify-lift", "--f", &f, "--h", &h, "--a", &a, "--nu", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    // two more bits of precision settle it: a check failure, not exhaustion
    let o = a4lift(&["verify-lift", "--f", &f, "--h", &h, "--a", &a, "--nu", "1", "--padic-precision", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

fn lift_files(dir: &Path, rep: &str) -> [String; 3] {
    let d = dir.to_str().unwrap();
    let o = a4lift(&["lift-base", rep, "--write-dir", d]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    ["F", "H", "A"].map(|n| dir.join(format!("{n}.json")).to_str().unwrap().to_string())
}

#[test]
fn verify_lift_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let [f, h, a] = lift_files(dir.path(), "t^-5 + g*t^-1");
    let o = a4lift(&["verify-lift", "--f", &f, "--h", &h, "--a", &a, "--nu", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], true);

    // corrupt the X^2 coefficient of F by a unit
    let mut fv: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let terms = fv.as_array_mut().unwrap();
    let x2 = terms.iter_mut().find(|t| t[0] == "2").unwrap();
    x2[1][0] = Value::Array(vec![Value::from(1)]);
    let bad = dir.path().join("F_bad.json");
    std::fs::write(&bad, fv.to_string()).unwrap();
    let o = a4lift(&["verify-lift", "--f", bad.to_str().unwrap(), "--h", &h, "--a", &a, "--nu", "5", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["name"].is_string()));

    // mismatched nu
    let o = a4lift(&["verify-lift", "--f", &f, "--h", &h, "--a", &a, "--nu", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("deg"));
}

#[test]
fn base_one_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let [f, h, a] = lift_files(dir.path(), "g^7*t^-1");
    let o = a4lift(&["verify-lift", "--f", &f, "--h", &h, "--a", &a, "--nu", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("residual min valuation = 4"));
}

#[test]
fn pipeline_json_round_trips_byte_exact() {
    for rep in ["t^-13", "t^-17", "t^-1", "g^3*t^-11 + t^-5", "t^-9"] {
        let o = a4lift(&["pipeline", rep, "--json"]);
        let text = stdout(&o);
        let cert = ChainCertificate::from_json(&text).unwrap();
        assert_eq!(cert.to_json(), text.trim_end());
        assert_eq!(ChainCertificate::from_json(&cert.to_json()).unwrap(), cert);
        assert_eq!(o.status.code() == Some(0), cert.verdict.pass, "{rep}");
    }
}

#[test]
fn pipeline_reads_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_a4lift"))
        .args(["pipeline", "--json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"t^-7\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let cert = ChainCertificate::from_json(&stdout(&o)).unwrap();
    assert_eq!(cert.breaks(), vec![7, 1]);
    assert_eq!(cert.chain[0].different_generic, "24");
}

fn config() -> PipelineConfig {
    let o = GlobalOptions {
        field_degree: 8,
        residue_degree: None,
        series_precision: 40,
        padic_precision: 8,
        ram_index: 10,
        mu: None,
        json: true,
    };
    PipelineConfig::from_options(&o, 8).unwrap()
}

fn check_chain(cert: &ChainCertificate, nu: u32) {
    let r = if nu % 6 == 1 { 1 } else { 5 };
    assert_eq!(cert.chain.len() as u32, (nu - r) / 6, "nu = {nu}");
    let breaks = cert.breaks();
    assert_eq!(breaks.first(), Some(&nu));
    assert_eq!(breaks.last(), Some(&r));
    assert!(breaks.windows(2).all(|w| w[0] - w[1] == 6));
    let all_checks = cert.chain.iter().all(|d| d.checks.iter().all(|c| c.pass))
        && cert.base_lift.as_ref().is_some_and(|b| b.checks.iter().all(|c| c.pass));
    assert_eq!(cert.verdict.pass, all_checks);
    assert!(cert.verdict.pass, "nu = {nu}: {:?}", cert.verdict);
}

#[test]
fn chain_length_for_every_break() {
    let cfg = config();
    for nu in a4_breaks(1, 41) {
        let (cert, kind) = pipeline_certificate(&format!("t^-{nu}"), &cfg);
        assert!(kind.is_none());
        check_chain(&cert, nu);
    }
    let mut rng = rng(61);
    for nu in a4_breaks(1, 41) {
        let a = random_a4_form(&mut rng, k8(), nu);
        let (cert, _) = pipeline_certificate(&a.to_string(), &cfg);
        check_chain(&cert, nu);
    }
}

#[test]
fn residue_degree_must_match_in_pipeline() {
    let o = a4lift(&["pipeline", "t^-7", "--residue-degree", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = a4lift(&["pipeline", "t^-7", "--field-degree", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["config"]["residue_degree"], "4");
}
