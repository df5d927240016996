use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use kk_core::format::{write_composition, write_digraph};
use kk_core::{gen, kings, Composition, Digraph};
use serde_json::Value;
use tempfile::TempDir;

const CYCLE3: &str = "digraph 3\n0 1\n1 2\n2 0\n";

fn kk(args: &[&str]) -> Output {
    kk_with(args, None, &[])
}

fn kk_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kk"));
    cmd.args(args)
        .env_remove("KK_MAX_N")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("kk runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

/// Parses stdout and checks it against the published schema for `name`.
fn json(o: &Output, name: &str) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    let v: Value = serde_json::from_slice(&o.stdout).expect("stdout is JSON");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name} output violates schema: {errors:?}\n{v}");
    v
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

fn establishable() -> Composition {
    let t = (4..=6)
        .flat_map(gen::all_tournaments)
        .find(|t| t.is_strong() && kings::can_establish(t).unwrap().ok)
        .unwrap();
    let mut factors = vec![Digraph::empty(1); t.n()];
    factors[0] = Digraph::new(2, [(0, 1)]).unwrap();
    Composition::new(t, factors).unwrap()
}

fn strong_composition() -> Composition {
    let outer = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let two_cycle = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
    Composition::new(outer, vec![two_cycle, Digraph::empty(1), Digraph::empty(1)]).unwrap()
}

#[test]
fn kings_on_three_cycle() {
    let f = Files::new();
    let path = f.put("c3.dg", CYCLE3);
    let v = json(&kk(&["kings", "--k", "3", &path]), "kings");
    assert_eq!(v["kings"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["ecc"], serde_json::json!([2, 2, 2]));
}

#[test]
fn kings_reads_stdin_and_reports_characterization() {
    let text = write_composition(&gen::remark_fixture());
    let v = json(&kk_with(&["kings", "--k", "3", "-"], Some(&text), &[]), "kings");
    assert_eq!(v["kings"], serde_json::json!([3]));
    assert_eq!(v["all_kings"], false);
    assert_eq!(v["characterization"]["exists"], true);
}

#[test]
fn unreachable_eccentricity_is_null() {
    let v = json(&kk_with(&["kings", "--k", "2", "-"], Some("digraph 2\n0 1\n"), &[]), "kings");
    assert_eq!(v["ecc"], serde_json::json!([1, null]));
}

#[test]
fn classify_rejects_non_strong_composition() {
    let f = Files::new();
    let path = f.put("remark.cmp", &write_composition(&gen::remark_fixture()));
    let o = kk(&["classify", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("strong"), "{}", stderr(&o));
}

#[test]
fn classify_strong_composition() {
    let f = Files::new();
    let path = f.put("s.cmp", &write_composition(&strong_composition()));
    let v = json(&kk(&["classify", &path]), "classify");
    assert_eq!(v["factors"], serde_json::json!({"1": "ALL", "2": "ALL", "3": "ALL"}));
    assert_eq!(v["three_kings"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let f = Files::new();
    let path = f.put("bad.dg", "digraph 2\n0 0\n");
    let o = kk(&["kings", "--k", "2", &path]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn establish_output() {
    let f = Files::new();
    let c = establishable();
    let path = f.put("e.cmp", &write_composition(&c));
    let v = json(&kk(&["establish", &path]), "establish");
    let n = c.n() as u64;
    assert_eq!(v["original_n"], n);
    assert_eq!(v["three_kings"], Value::from((0..n).collect::<Vec<_>>()));
    let dot = kk(&["establish", "--dot", &path]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph"));
}

#[test]
fn quasikernel_and_disjoint() {
    let f = Files::new();
    let d = f.put("c3.dg", CYCLE3);
    let v = json(&kk(&["quasikernel", &d]), "quasikernel");
    assert_eq!(v["kind"], "QUASI_KERNEL");
    assert_eq!(v["validated"], true);

    let outer = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
    let factors = vec![
        Digraph::new(2, [(0, 1), (1, 0)]).unwrap(),
        Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap(),
    ];
    let c = f.put("q.cmp", &write_composition(&Composition::new(outer, factors).unwrap()));
    let v = json(&kk(&["disjoint-qk", &c]), "disjoint-qk");
    let a: Vec<u64> = serde_json::from_value(v["first"]["vertices"].clone()).unwrap();
    let b: Vec<u64> = serde_json::from_value(v["second"]["vertices"].clone()).unwrap();
    assert!(a.iter().all(|x| !b.contains(x)));

    let sinky = f.put("tt.cmp", "composition 2\nouter\n0 1\nfactor 1 1\nfactor 2 1\n");
    assert_eq!(code(&kk(&["disjoint-qk", &sinky])), 1);
}

#[test]
fn kkernel_and_oracle() {
    let f = Files::new();
    let c = f.put("s.cmp", &write_composition(&strong_composition()));
    let v = json(&kk(&["kkernel", "--k", "4", &c]), "kkernel");
    assert_eq!(v["exists"], true);
    assert_eq!(v["certificate"]["validated"], true);
    assert_eq!(code(&kk(&["kkernel", "--k", "3", &c])), 1);

    let c4 = f.put("c4.dg", "digraph 4\n0 1\n1 2\n2 3\n3 0\n");
    let v = json(&kk(&["oracle", "--k", "3", &c4]), "oracle");
    assert_eq!(v["exists"], false);
    assert_eq!(v["certificate"], Value::Null);

    let capped = kk_with(&["oracle", "--k", "3", &c4], None, &[("KK_MAX_N", "3")]);
    assert_eq!(code(&capped), 1);
    assert_eq!(code(&kk(&["oracle", "--k", "3", "--max-n", "3", &c4])), 1);
}

#[test]
fn reduce_builds_gadget() {
    let v = json(&kk_with(&["reduce", "-"], Some("digraph 2\n"), &[]), "reduce");
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
    assert_eq!(v["outer"]["arcs"], serde_json::json!([[0, 1], [1, 2], [2, 0]]));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let args = ["gen", "--kind", "composition", "--t", "4", "--sizes", "1,3", "--p", "0.3", "--p2", "0.2", "--seed", "11", "--constraints", "strong-outer"];
    let a = json(&kk(&args), "gen");
    let b = json(&kk(&args), "gen");
    assert_eq!(a, b);

    let mut text_args = vec!["--format", "text"];
    text_args.extend(args);
    let text = String::from_utf8(kk(&text_args).stdout).unwrap();
    let v = json(&kk_with(&["validate", "-"], Some(&text), &[]), "validate");
    assert_eq!(v["outer"]["outer_strong"], true);

    let t = json(&kk(&["gen", "--kind", "tournament", "--n", "5", "--seed", "42"]), "gen");
    let d: Digraph = serde_json::from_value(t).unwrap();
    assert_eq!(d, gen::random_tournament(5, 42));
    assert_eq!(code(&kk(&["gen", "--kind", "tournament", "--n", "3", "--p", "1.5"])), 1);
    assert_eq!(code(&kk(&["gen", "--kind", "composition", "--t", "3", "--outer", "composition"])), 1);
}

#[test]
fn validate_certificate_file() {
    let f = Files::new();
    let d = f.put("c3.dg", CYCLE3);
    let good = f.put("good.json", r#"{"kind":"QUASI_KERNEL","k":null,"vertices":[0],"validated":false}"#);
    let bad = f.put("bad.json", r#"{"kind":"K_KERNEL","k":2,"vertices":[0,1],"validated":false}"#);
    let v = json(&kk(&["validate", &d, "--cert", &good]), "validate");
    assert_eq!(v["certificate_valid"], true);
    let v = json(&kk(&["validate", &d, "--cert", &bad]), "validate");
    assert_eq!(v["certificate_valid"], false);
    assert_eq!(v["class"]["is_strong"], true);
}

#[test]
fn experiment_thmd_summary() {
    let v = json(&kk(&["experiment", "thmd", "--seeds", "1000", "--max-n", "12"]), "experiment");
    assert_eq!(v["instances"], 1000);
    assert_eq!(v["violations"], 0);
}

#[test]
fn every_experiment_id_runs() {
    for id in [
        "thma", "thmd", "thmc", "thme", "thmf", "thm012", "thm011", "thmb1", "thmc1", "thmd2-poly", "thmd2-reduction", "lem11",
    ] {
        let v = json(&kk(&["experiment", id, "--seeds", "10"]), "experiment");
        assert_eq!(v["experiment"], id);
        assert_eq!(v["violations"], 0);
    }
    assert_eq!(code(&kk(&["experiment", "nope"])), 2);
}

#[test]
fn text_format() {
    let o = kk_with(&["--format", "text", "kings", "--k", "2", "-"], Some(CYCLE3), &[]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("kings: 0 1 2"), "{out}");
    let o = kk_with(&["--format", "text", "gen", "--kind", "semicomplete", "--n", "4", "--seed", "3"], None, &[]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("digraph 4\n"));
}

#[test]
fn dot_export() {
    let o = kk_with(&["kings", "--k", "2", "--dot", "-"], Some(&write_digraph(&gen::random_tournament(4, 1))), &[]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.starts_with("digraph") && out.contains("->"), "{out}");
}
