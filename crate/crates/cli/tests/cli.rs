use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Self {
        Env {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn cache(&self) -> PathBuf {
        self.dir.path().join("cache.jsonl")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_refined-count"))
            .args(args)
            .env("REFINED_COUNT_CACHE", self.cache())
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data/curves")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn count_cubic() {
    let env = Env::new();
    let out = env.run(&["count", "P2:d=3", "--genus", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("y+10+y^-1"), "{text}");
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["G(1)", "12"]));
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["G(-1)", "8"]));
    assert!(text.contains("agreement  yes"));
}

#[test]
fn count_json_values() {
    let env = Env::new();
    let v = json(&env.run(&["count", "P2:d=4", "--genus", "2", "--format", "json"]));
    assert_eq!(v["text"], "3*y+21+3*y^-1");
    assert_eq!(v["agree"], true);
    let line = json(&env.run(&["count", "P2:d=1", "--format", "json"]));
    assert_eq!(line["text"], "1");
    assert_eq!(line["at_minus_one"], "1");
}

#[test]
fn count_csv_quotes_specs() {
    let env = Env::new();
    let out = env.run(&[
        "count",
        "P1xP1:d=2,r=2",
        "--engine",
        "path",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&out),
        "spec,genus,engine,delta,polynomial,at_one,at_minus_one\n\"P1xP1:d=2,r=2\",0,path,1,y+10+y^-1,12,8\n"
    );
}

#[test]
fn diagram_listing() {
    let env = Env::new();
    let out = env.run(&["diagrams", "P2:d=4", "--genus", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 13);
    let json_lines = stdout(&env.run(&["diagrams", "P2:d=3", "--format", "json"]));
    let nus: Vec<String> = json_lines
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["nu"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(nus, ["3", "5", "1"]);
}

#[test]
fn path_listing() {
    let env = Env::new();
    let out = env.run(&["paths", "P2:d=3", "--genus", "1", "--format", "json"]);
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["points"].as_array().unwrap().len(), 10);
    assert_eq!(
        (lines[0]["mu_plus"].as_str(), lines[0]["mu_minus"].as_str()),
        (Some("1"), Some("1"))
    );
    let all = env.run(&["paths", "P2:d=3", "--lambda", "lex:-y,+x"]);
    assert_eq!(stdout(&all).lines().count(), 8);
}

#[test]
fn analyze_quartic() {
    let env = Env::new();
    let out = env.run(&["analyze", "P2:d=4", "--genus", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let check = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "a_{delta-1}")
        .unwrap()
        .clone();
    assert_eq!(check["expected"], "13");
    assert_eq!(check["pass"], true);
    assert_eq!(v["delta"], "3");
}

#[test]
fn invariance_suite() {
    let env = Env::new();
    let out = env.run(&["invariance", "P2:d=3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
    assert_eq!(v["evaluations"]["at_one"], "12");
}

#[test]
fn curve_report() {
    let env = Env::new();
    let out = env.run(&[
        "curve",
        &corpus("one_vertex_unimodular.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mu_complex"], "1");
    assert_eq!(v["text"], "1");
    let witness = json(&env.run(&[
        "curve",
        &corpus("p2_d3_g0_multiplicity3_witness.json"),
        "--format",
        "json",
    ]));
    assert_eq!(witness["text"], "y+1+y^-1");
}

#[test]
fn exit_codes() {
    let env = Env::new();
    assert_eq!(env.run(&["count", "P3:d=1"]).status.code(), Some(2));
    assert_eq!(env.run(&["count"]).status.code(), Some(2));
    let irregular = "polygon:(1,0),(3,0),(2,1),(0,2),(0,1)";
    assert_eq!(
        env.run(&["count", irregular, "--engine", "floor"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(env.run(&["diagrams", irregular]).status.code(), Some(3));
    let nonprimitive = "vectors:(-1,0);(1,3);(0,-1);(0,-2)";
    assert_eq!(env.run(&["paths", nonprimitive]).status.code(), Some(3));
    let missing = env.dir.path().join("missing.json");
    assert_eq!(
        env.run(&["curve", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let ok = env.run(&["count", irregular]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("y+8+y^-1"));
}

#[test]
fn output_is_deterministic() {
    let env = Env::new();
    for args in [
        &["count", "P2:d=4", "--genus", "1", "--format", "json"][..],
        &["diagrams", "P1xP1:d=2,r=3", "--genus", "1"][..],
        &["analyze", "P1xP1:d=2,r=2", "--format", "csv"][..],
    ] {
        let a = env.run(args);
        let b = env.run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn cache_round_trip_and_verification() {
    let env = Env::new();
    let first = env.run(&["count", "P2:d=4", "--genus", "1"]);
    let text = std::fs::read_to_string(env.cache()).unwrap();
    let entries: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["key"]["spec"], "P2:d=4");
    assert_eq!(entries[0]["engine"], "floor");
    assert_eq!(entries[1]["engine"], "path");
    assert_eq!(
        entries[0]["value"],
        serde_json::json!([[4, "3"], [2, "33"], [0, "153"], [-2, "33"], [-4, "3"]])
    );

    let mut corrupted = text.clone();
    corrupted.push_str("{not json\n");
    std::fs::write(env.cache(), &corrupted).unwrap();
    let again = env.run(&["count", "P2:d=4", "--genus", "1", "--verify-cache"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(again.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&again.stderr).contains("skipping corrupt cache line"));

    let tampered = text.replace("\"153\"", "\"154\"");
    std::fs::write(env.cache(), tampered).unwrap();
    let hit = env.run(&["count", "P2:d=4", "--genus", "1", "--engine", "floor"]);
    assert!(stdout(&hit).contains("154"));
    let verify = env.run(&["count", "P2:d=4", "--genus", "1", "--verify-cache"]);
    assert_eq!(verify.status.code(), Some(1));
}
