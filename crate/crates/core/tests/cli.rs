use std::io::Write;
use std::process::Command;

use qlab::cli::{run, Outcome};
use serde_json::Value;

fn qlab(args: &[&str]) -> Outcome {
    run(std::iter::once("qlab").chain(args.iter().copied()))
}

fn stdout(o: &Outcome) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Outcome) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn values(o: &Outcome) -> Vec<String> {
    json(o)["results"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap().to_string()).collect()
}

#[test]
fn values_command() {
    let o = qlab(&["values", "DSOME", "0", "7", "all"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(values(&o), ["0", "1", "-2", "2", "0", "3", "-4", "-1"]);
    assert_eq!(json(&o)["config"]["consistent"], Value::Bool(true));
    let o = qlab(&["values", "SOME", "1", "5", "all"]);
    assert_eq!(values(&o), ["1", "0", "5", "0", "11"]);
    let o = qlab(&["values", "DSOME", "0", "0", "brute", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,value\n0,0\n");
    let o = qlab(&["values", "DSOME", "0", "7", "all", "--mod", "4"]);
    assert_eq!(values(&o), ["0", "1", "2", "2", "0", "3", "0", "3"]);
    assert_eq!(qlab(&["values", "SOME", "0", "3", "closed"]).code, 1);
}

#[test]
fn expand_command() {
    let o = qlab(&["expand", "f2/f1", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,value\n0,1\n1,1\n2,1\n3,2\n");
    assert_eq!(values(&qlab(&["expand", "K", "1"])), ["1"]);
    let o = qlab(&["expand", "(1/8)(f2/f1 - f1^7/f2^3)", "8"]);
    assert_eq!(values(&o), ["0", "1", "-2", "2", "0", "3", "-4", "-1"]);
    let o = qlab(&["-N", "3", "expand", "1/(1-q)"]);
    assert_eq!(values(&o), ["1", "1", "1"]);
}

#[test]
fn envelope_shape() {
    let o = qlab(&["expand", "f1", "2"]);
    let v = json(&o);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["tool_version", "config", "results"]);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn exit_codes() {
    let o = qlab(&["expand", "f1 +* f2", "4"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("byte 4"), "{}", o.stderr);
    assert_eq!(qlab(&["expand", "f1", "10", "--cap", "5"]).code, 3);
    assert_eq!(qlab(&["check", "DSOME[4n+1] == 0 mod 4", "--nmax", "10"]).code, 4);
    assert_eq!(qlab(&["check", "DSOME[4n] == 0 mod 4", "--nmax", "500"]).code, 0);
    assert_eq!(qlab(&["check", "DSOME[4n] == 0 mod 1"]).code, 2);
    assert_eq!(qlab(&["check", "DSOME[250n+21] == 0 mod 8", "--cap", "1000"]).code, 3);
    assert_eq!(qlab(&["bogus"]).code, 2);
}

#[test]
fn verify_all_at_200() {
    let o = qlab(&["verify", "--all", "-N", "200", "--threads", "4"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    for r in v["results"].as_array().unwrap() {
        let fails = r["expected"] == "fails";
        assert_eq!(r["status"] == "Holds", !fails, "{r}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "binom-*", "-N", "120", "--threads", "1"];
    let a = qlab(&args);
    let b = qlab(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut par = json(&qlab(&["verify", "binom-*", "-N", "120", "--threads", "3"]));
    let mut seq = json(&a);
    par["config"]["threads"] = Value::Null;
    seq["config"]["threads"] = Value::Null;
    assert_eq!(par, seq);
    let timed = json(&qlab(&["verify", "binom-1-1", "-N", "50", "--timings"]));
    assert!(timed["results"][0]["wall_time_ms"].is_number());
    assert!(seq["results"][0].get("wall_time_ms").is_none());
}

#[test]
fn scan_command() {
    let o = qlab(&["scan", "DSOME", "--step", "250", "--mod", "8", "--nmax", "100"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    let bs: Vec<u64> = v["results"].as_array().unwrap().iter().map(|h| h["residue"].as_u64().unwrap()).collect();
    for b in [21, 71, 121, 171, 221] {
        assert!(bs.contains(&b));
    }
    assert_eq!(qlab(&["scan", "DSOME", "--step", "4", "--mod", "4", "--min-support", "5"]).code, 1);
    let o = qlab(&["scan", "DSOME", "--steps", "1..4", "--moduli", "2,4", "--nmax", "60", "--format", "csv"]);
    assert!(stdout(&o).starts_with("step,residue,modulus,verified_up_to,support,witness_free\n"));
}

#[test]
fn out_file_and_corpus_flag() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.txt");
    std::fs::write(&corpus, "one | f1 f1^-1 | 1 | 1 | exact | |\n").unwrap();
    let out = dir.path().join("r.json");
    let o = qlab(&["verify", "--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["results"][0]["id"], "one");
    std::fs::write(&corpus, "broken | f1 | f1 |\n").unwrap();
    assert_eq!(qlab(&["verify", "--corpus", corpus.to_str().unwrap()]).code, 2);
}

#[test]
fn corpus_env_and_seeded_faults() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "good | f2/f1 | npoch(1,1) | 1 | exact | |").unwrap();
    writeln!(f, "bad | f2/f1 | npoch(1,1) + q^5 | 1 | exact | |").unwrap();
    writeln!(f, "typo | f2/f1 | npoch(1,1) + q^5 | 1 | exact | | expect=fails").unwrap();
    let bin = env!("CARGO_BIN_EXE_qlab");
    let run_env = |args: &[&str]| Command::new(bin).args(args).env("QLAB_CORPUS", f.path()).output().unwrap();
    let o = run_env(&["verify", "good", "-N", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_env(&["verify", "typo", "-N", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_env(&["verify", "--all", "-N", "40"]);
    assert_eq!(o.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][1]["fail_index"], 5);
    let o = Command::new(bin).args(["expand", "f1^", "3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
