use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn arknit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arknit"))
        .args(args)
        .env_remove("ARKNIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn ass_on_a3_reports_a_passing_battery() {
    let out = arknit(&["ass", "--quiver", &fixture("a3.json"), "--rep", &fixture("S2.json")]);
    let v = json(&out);
    assert_eq!(v["schema"], "arknit/1");
    assert_eq!(v["kind"], "ses");
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["ses"]["dims"]["middle"], serde_json::json!({"2": 1, "3": 1}));
    assert_eq!(v["ses"]["dims"]["sub"], serde_json::json!({"3": 1}));
    assert_eq!(v["ses"]["quot"], serde_json::json!({"simple": "2"}));
}

#[test]
fn member_on_zigzag_tail_is_not_in_rrep() {
    let out = arknit(&["member", "--quiver", &fixture("zigzag.json"), "--rep", &fixture("M0.json")]);
    let v = json(&out);
    assert_eq!(v["verdict"], "notInRrep");
    assert_eq!(v["evidence"]["kind"], "noInfinitePaths");
    assert_eq!(v["recheck"], true);
}

fn edges(dot: &str) -> (usize, usize) {
    let solid = dot.lines().filter(|l| l.contains(" -> ") && !l.contains("dashed")).count();
    let dashed = dot.lines().filter(|l| l.contains("dashed")).count();
    (solid, dashed)
}

#[test]
fn kronecker_dot_has_six_vertices_and_doubled_arrows() {
    let out = arknit(&[
        "knit",
        "--quiver",
        &fixture("kronecker.json"),
        "--seed",
        &fixture("P2.json"),
        "--depth",
        "5",
        "--format",
        "dot",
    ]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 6);
    assert_eq!(edges(&dot), (10, 4));
    for n in 0..6 {
        assert!(dot.contains(&format!("\"1:{n} 2:{}", n + 1)) || (n == 0 && dot.contains("\"2:1\\n")), "{dot}");
    }
}

#[test]
fn a3_component_matches_the_golden_file() {
    let out = arknit(&["knit", "--quiver", &fixture("a3.json"), "--seed", &fixture("P3.json"), "--format", "dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    let golden = std::fs::read_to_string(fixture("a3_component.dot")).unwrap();
    assert_eq!(dot, golden);
    assert_eq!(golden.lines().filter(|l| l.contains("[label=")).count(), 6);
    assert_eq!(edges(&golden), (6, 3));
}

#[test]
fn identical_invocations_are_bit_identical() {
    let args = ["knit", "--quiver", &fixture("kronecker.json"), "--seed", &fixture("P2.json"), "--depth", "3"];
    let runs: Vec<Vec<u8>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..3).map(|_| s.spawn(|| arknit(&args).stdout)).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(v["shape"]["shape"], "Preprojective-NQop");
}

#[test]
fn usage_errors_exit_with_one() {
    let out = arknit(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = arknit(&["knit", "--quiver", &fixture("a3.json"), "--seed", &fixture("P3.json"), "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let out = arknit(&["member", "--quiver", &fixture("a3.json"), "--rep", &fixture("S2.json"), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(1));
    let out = arknit(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_is_position_annotated() {
    let out = arknit(&["rep", "--quiver", &fixture("a3.json"), "--rep", "{\"simple\": \"2\",}"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column"), "{err}");
    let out = arknit(&["rep", "--quiver", &fixture("a3.json"), "--rep", "{\"sum\": [{\"proj\": \"1\"}, {\"inj\": \"x\"}]}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/sum/1/inj"));
    let out = arknit(&["quiver", "--quiver", "{\"preset\": \"moebius\"}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/preset"));
    let out = arknit(&["quiver", "--quiver", "/nonexistent/q.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_with_one() {
    let out = arknit(&["tau", "--quiver", &fixture("a3.json"), "--rep", "{\"proj\": \"1\"}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("translate undefined"));
    let out = arknit(&["quiver", "--quiver", "{\"vertices\": [\"1\", \"2\"], \"arrows\": [[\"1\", \"2\", \"a\"], [\"2\", \"1\", \"b\"]]}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("interval-finiteness"));
}

#[test]
fn budget_exhaustion_exits_with_two() {
    let ladder = "{\"preset\": \"ladder\"}";
    let out = arknit(&["member", "--quiver", ladder, "--rep", "{\"thin\": \"all\"}", "--budget", "2,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "unknown");
    let out = arknit(&["member", "--quiver", ladder, "--rep", "{\"thin\": \"all\"}", "--budget", "4,2,6"]);
    assert_eq!(json(&out)["verdict"], "notInRrep");
    let line = "{\"preset\": \"line\"}";
    let out = arknit(&["tau", "--quiver", line, "--rep", "{\"thin\": \"all\"}", "--budget", "2,1,3"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_arknit"))
        .args(["quiver", "--quiver", &fixture("a3.json")])
        .env("ARKNIT_BUDGET", "4,2,10")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["budget"], serde_json::json!({"radius": 4, "step": 2, "max_radius": 10}));
    let out = Command::new(env!("CARGO_BIN_EXE_arknit"))
        .args(["quiver", "--quiver", &fixture("a3.json"), "--radius", "9"])
        .env("ARKNIT_BUDGET", "4,2,10")
        .output()
        .unwrap();
    assert_eq!(json(&out)["budget"]["radius"], 9);
    let out = Command::new(env!("CARGO_BIN_EXE_arknit"))
        .args(["quiver", "--quiver", &fixture("a3.json")])
        .env("ARKNIT_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_round_trips() {
    let dir = std::env::temp_dir().join(format!("arknit-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let first = dir.join("first.json");
    let rep = "{\"glue\": {\"sub\": {\"proj\": 0}, \"quot\": {\"inj\": 1}, \"cocycle\": {\"1->0\": [[1]]}}}";
    let out = arknit(&["export", "--quiver", "{\"preset\": \"line\"}", "--rep", rep, "-o", first.to_str().unwrap()]);
    assert!(out.status.success());
    let f = first.to_str().unwrap();
    let again = arknit(&["export", "--quiver", f, "--rep", f]);
    assert_eq!(std::fs::read(&first).unwrap(), again.stdout);
    let v = json(&again);
    assert_eq!(v["rep"]["glue"]["sub"], serde_json::json!({"proj": "0"}));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_verb_answers_on_small_inputs() {
    let a3 = fixture("a3.json");
    let s2 = fixture("S2.json");
    let p3 = fixture("P3.json");
    let v = json(&arknit(&["quiver", "--quiver", "{\"preset\": \"zigzag\"}"]));
    assert_eq!(v["ar_kind"], "both");
    let v = json(&arknit(&["rep", "--quiver", &a3, "--rep", &p3]));
    assert_eq!(v["total_dim"], 1);
    let v = json(&arknit(&["hom", "--quiver", &a3, "--rep", &p3, "--other", "{\"proj\": \"2\"}"]));
    assert_eq!(v["hom"]["dim"], 1);
    let v = json(&arknit(&["hom", "--quiver", &a3, "--rep", &p3, "--other", "{\"proj\": \"2\"}", "--route", "window"]));
    assert_eq!(v["hom"]["route"], "window");
    let v = json(&arknit(&["ext", "--quiver", &a3, "--rep", &s2, "--other", &p3]));
    assert_eq!(v["ext"]["dim"], 1);
    let v = json(&arknit(&["tau", "--quiver", &a3, "--rep", &s2]));
    assert_eq!(v["translate"], serde_json::json!({"explicit": {"dims": {"3": 1}, "maps": {}}}));
    let v = json(&arknit(&["tau", "--quiver", &a3, "--rep", &p3, "--inverse"]));
    assert_eq!(v["dims"], serde_json::json!({"2": 1}));
    let v = json(&arknit(&["ass", "--quiver", &a3, "--rep", &p3, "--starting"]));
    assert_eq!(v["report"]["passed"], true);
    let v = json(&arknit(&["classify", "--quiver", &a3, "--seed", &s2]));
    assert_eq!(v["shape"], "Finite");
    assert_eq!(v["vertices"], 6);
    let sum = "{\"sum\": [{\"simple\": \"2\"}, {\"proj\": \"1\"}, {\"simple\": \"2\"}]}";
    let v = json(&arknit(&["decompose", "--quiver", &a3, "--rep", sum]));
    let mult: Vec<u64> = v["summands"].as_array().unwrap().iter().map(|s| s["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mult.iter().sum::<u64>(), 3);
    let v = json(&arknit(&["ass", "--quiver", &a3, "--rep", &s2, "--field", "F5"]));
    assert_eq!(v["field"], "F5");
    assert_eq!(v["report"]["passed"], true);
    let out = arknit(&["ass", "--quiver", &a3, "--rep", &s2, "--field", "11"]);
    assert_eq!(out.status.code(), Some(1));
}
