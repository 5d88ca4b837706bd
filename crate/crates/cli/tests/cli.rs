use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pickychar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pickychar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = pickychar(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).expect("valid JSON");
    assert_eq!(v["schema"], "picky-char/1");
    v
}

#[test]
fn char_eval_prints_the_value() {
    let o = pickychar(&["char", "eval", "--n", "8", "--lambda", "3,3,2", "--type", "4,2,1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-2");
}

#[test]
fn char_table_uses_string_integers() {
    let v = json(&["char", "table", "--n", "8", "--p", "2", "--type", "4,2,1,1"]);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 22);
    let r = records.iter().find(|r| r["lambda"] == "4,3,1").unwrap();
    assert_eq!(r["degree"], "70");
    assert_eq!(r["nu_p"], 1);
    assert!(r["values"]["4,2,1,1"].is_string());
}

#[test]
fn cache_dir_spills_and_reloads_columns() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pickychar"))
            .args(["--json", "char", "table", "--n", "6", "--type", "3,3"])
            .env("PICKYCHAR_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(dir.path().join("column-3_3.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn partition_and_tower_commands() {
    let v = json(&["partition", "info", "--lambda", "4,3,1", "--q", "2"]);
    assert_eq!(v["degree"], "70");
    assert_eq!(v["hook_lengths"][0], serde_json::json!([6, 4, 3, 1]));
    let v = json(&["tower", "build", "--lambda", "4,3,1", "--p", "2"]);
    assert_eq!(v["p"], 2);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r.is_array()));
}

#[test]
fn picky_and_sylow_commands() {
    let o = pickychar(&["picky", "classify", "--n", "8", "--p", "2", "--type", "4,2,1,1"]);
    assert_eq!(stdout(&o), "TypeII");
    let v = json(&["picky", "list", "--n", "8", "--p", "2"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    let o = pickychar(&["sylow", "blocks", "--n", "6", "--p", "3", "--count"]);
    assert!(o.status.success());
    assert!(stdout(&o).parse::<usize>().unwrap() > 0);
}

#[test]
fn sub_commands() {
    let v = json(&["sub", "shape", "--perm", "(1,2,3,4)(5,6)", "--n", "8"]);
    assert_eq!(v["order"], "128");
    let o = pickychar(&["sub", "brute", "--perm", "(1,2,3,4)(5,6)", "--n", "8"]);
    assert_eq!(stdout(&o), "128");
    let v = json(&["sub", "verify", "--n", "6"]);
    assert_eq!(v["checked"], v["agree"]);
}

#[test]
fn local_commands() {
    let o = pickychar(&["local", "irr", "--k", "3", "--degrees"]);
    assert_eq!(stdout(&o), "1 x8\n2 x6\n4 x6");
    let o = pickychar(&["local", "eval", "--k", "3", "--char", "(ext (pair b0 b1) -1)", "--elem", "(1,2)(3,4)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-4");
    // Outside the interval Sylow subgroup.
    let o = pickychar(&["local", "eval", "--k", "3", "--char", "b0", "--elem", "(1,2,3,4)(5,6)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bijection_build_and_verify() {
    let v = json(&["bijection", "build", "--n", "8", "--p", "2"]);
    assert_eq!(v["context"]["kind"], "type-ii");
    assert_eq!(v["triples"].as_array().unwrap().len(), 10);
    let v = json(&["bijection", "verify", "--n", "12", "--p", "3"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(v["millis"].is_number());
    let o = pickychar(&["--json", "bijection", "verify", "--n", "8", "--p", "2", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "sign_bookkeeping");
}

#[test]
fn parse_errors_are_reported() {
    let o = pickychar(&["sub", "shape", "--perm", "(1,1)", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("repeated"));
    let o = pickychar(&["--max-n", "5", "char", "eval", "--n", "8", "--lambda", "8", "--type", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_suite_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = pickychar(&["--max-n", "4", "suite", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    for id in 1..=12 {
        let text = fs::read_to_string(out.join(format!("criterion-{id:02}.json"))).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], "picky-char/1");
        assert_eq!(v["pass"], true);
    }
    let csv = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("id,title,pass,checked,failed"));
}

#[test]
fn suite_reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        pickychar(&["--max-n", "6", "--seed", "3", "--jobs", "2", "suite", "--only", "7,9,10", "--out", out.to_str().unwrap()]);
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["criterion-07.json", "criterion-09.json", "criterion-10.json", "summary.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn injected_faults_fail_the_pairing_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("faulty");
    let o = pickychar(&["--max-n", "5", "suite", "--only", "9,10", "--inject-fault", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL  9"), "{text}");
    assert!(text.contains("FAIL 10"), "{text}");
    assert!(text.contains("sign_bookkeeping"));
}
