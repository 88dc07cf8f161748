use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumset-kit"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn last_json(stdout: &str) -> Value {
    serde_json::from_str(stdout.lines().last().expect("output")).expect("json")
}

const Z6_PAIR: [&str; 6] = ["--group", "Z6", "--A", "[[0],[1],[4]]", "--B", "[[0],[1],[3],[4]]"];

#[test]
fn analyze_embeds_three_valid_certificates() {
    let mut args = vec!["analyze"];
    args.extend(Z6_PAIR);
    args.extend(["--decompose", "kemperman,dual,me"]);
    let (code, out) = run(&args);
    assert_eq!(code, 0);
    let v = last_json(&out);
    let certs = &v["certificates"];
    assert_eq!(
        certs["kemperman"]["certificate"],
        json!({"kind": "kemperman", "H": [[0], [3]], "A0": [[0]], "B0": [[0], [3]]})
    );
    assert_eq!(
        certs["dual"]["certificate"],
        json!({"kind": "dual", "form": "split", "H": [[0], [3]], "A0": [[0]], "B0": [[0], [3]]})
    );
    assert_eq!(certs["me"]["certificate"], json!({"kind": "me", "H": [[0], [3]]}));
    for m in ["kemperman", "dual", "me"] {
        assert_eq!(certs[m]["valid"], json!(true));
    }
    assert!(v["duration_ms"].is_number());
}

#[test]
fn analyze_is_deterministic_apart_from_duration() {
    let mut args = vec!["analyze"];
    args.extend(Z6_PAIR);
    let strip = |s: String| {
        let mut v = last_json(&s);
        v.as_object_mut().unwrap().remove("duration_ms");
        v.to_string()
    };
    assert_eq!(strip(run(&args).1), strip(run(&args).1));
}

#[test]
fn tampered_certificate_names_clause_ii() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["decompose"];
    args.extend(Z6_PAIR);
    let (code, out) = run(&args);
    assert_eq!(code, 0);
    let mut cert = last_json(&out);
    let good = dir.path().join("good.json");
    std::fs::write(&good, cert.to_string()).unwrap();
    cert["certificate"]["B0"] = json!([[0]]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, cert.to_string()).unwrap();

    let check = |path: &std::path::Path| {
        let mut args = vec!["check-cert".to_string()];
        args.extend(Z6_PAIR.iter().map(|s| s.to_string()));
        args.extend(["--cert".to_string(), path.display().to_string()]);
        let out = bin().args(&args).output().unwrap();
        (out.status.code().unwrap(), last_json(&String::from_utf8(out.stdout).unwrap()))
    };
    let (code, v) = check(&good);
    assert_eq!((code, v["valid"].clone()), (0, json!(true)));
    let (code, v) = check(&bad);
    assert_eq!(code, 1);
    assert_eq!(v["failing"], json!(["(ii)"]));
}

#[test]
fn precondition_errors_exit_one_with_error_json() {
    let (code, out) = run(&["decompose", "--group", "Z4", "--A", "0,2", "--B", "0,2"]);
    assert_eq!(code, 1);
    let v = last_json(&out);
    assert_eq!(v["error"]["kind"], json!("precondition"));
    assert_eq!(v["error"]["hypothesis"], json!("kemperman_condition"));
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["decompose", "--group", "Z6"],
        vec!["decompose", "--group", "Zq", "--A", "0", "--B", "0"],
        vec!["verify", "--group", "Z6", "--A", "0", "--B", "0", "--theorem", "vosper"],
        vec!["scan", "--suite", "nothing"],
        vec!["scan", "--max-order", "600"],
        vec!["scan", "--catalog", "Z5", "--min-size", "3", "--max-size", "2"],
        vec!["classify", "--group", "Z2xZ2", "--A", "0,1"],
    ] {
        let (code, out) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(last_json(&out)["error"].is_object(), "{args:?}");
    }
}

#[test]
fn verify_reports_each_statement() {
    let (code, out) = run(&["verify", "--group", "Z6", "--A", "0,1,5", "--B", "0,1,5", "--theorem", "kneser"]);
    assert_eq!(code, 0);
    let v = last_json(&out);
    assert_eq!(v["theorem_id"], json!("kneser"));
    assert_eq!((v["hypotheses_hold"].clone(), v["conclusion_holds"].clone()), (json!(true), json!(true)));

    let (code, out) = run(&["verify", "--group", "Z7", "--A", "0,1,3", "--theorem", "thick"]);
    assert_eq!((code, last_json(&out)["conclusion_holds"].clone()), (0, json!(true)));

    let (code, out) = run(&["verify", "--group", "Z2xZ2xZ2", "--A", "[[0,0,0],[0,1,0],[1,0,0],[1,1,1]]", "--theorem", "prior_bounds"]);
    assert_eq!(code, 0);
    assert_eq!(last_json(&out)["witness"]["c"], json!({"num": 7, "den": 4}));
}

#[test]
fn synth_reports_predicted_doubling() {
    let (code, out) = run(&[
        "synth",
        "--group",
        "Z2xZ2xZ2xZ2",
        "--F",
        "[[0,0,0,0],[1,0,0,0],[0,1,0,0],[0,0,1,0],[1,1,0,0],[1,0,1,0],[0,1,1,0],[1,1,1,0]]",
        "--H",
        "[[0,0,0,0],[0,0,0,1]]",
        "--S",
        "[[0,0,0,0],[0,1,0,0],[1,0,0,0],[1,1,1,0]]",
    ]);
    assert_eq!(code, 0);
    let v = last_json(&out);
    assert_eq!((v["predicted_doubling"].clone(), v["doubling"].clone()), (json!(14), json!(14)));

    let (code, out) = run(&[
        "synth",
        "--group",
        "Z2xZ2xZ2",
        "--F",
        "[[0,0,0],[1,0,0],[0,1,0],[1,1,0]]",
        "--H",
        "[[0,0,0],[0,0,1]]",
        "--S",
        "[[0,0,0],[0,1,0]]",
        "--removed",
        "[[0,0,0]]",
    ]);
    assert_eq!(code, 1);
    assert_eq!(last_json(&out)["error"]["kind"], json!("contract"));
}

#[test]
fn scan_writes_jsonl_and_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    let scan = |jobs: &str, out: &str| {
        run(&[
            "scan", "--catalog", "Z2,Z3,Z4,Z2xZ2,Z5,Z6", "--suite", "all", "--samples", "200", "--jobs", jobs, "--out", out,
        ])
    };
    let (c1, s1) = scan("1", &path("a.jsonl"));
    let (c2, s2) = scan("4", &path("b.jsonl"));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(s1, s2);
    let a = std::fs::read_to_string(path("a.jsonl")).unwrap();
    assert_eq!(a, std::fs::read_to_string(path("b.jsonl")).unwrap());
    let summary = last_json(&a);
    assert_eq!(summary["record"], json!("summary"));
    assert_eq!(summary["summary"]["violations"], json!(0));
    for line in a.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v.get("record").is_some());
    }
}

#[test]
fn subgroup_cap_is_read_from_environment() {
    let out = bin()
        .env("SUMSET_KIT_MAX_ORDER", "4")
        .args(["decompose", "--group", "Z6", "--A", "0,1,4", "--B", "0,1,3,4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = last_json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v["error"]["kind"], json!("resource"));
}
