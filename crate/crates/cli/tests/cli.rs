use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let f = Fixture { dir };
        f.write("p3.dg", "vertices: 1 2 3\nedges: 1-2 2-3\n");
        f.write("c3.dg", "vertices: 1 2 3\nedges: 1-2 2-3 1-3\n");
        f.write("p5.dg", "vertices: 1 2 3 4 5\nedges: 1-2 2-3 3-4 4-5\n");
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

fn assoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assoc")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn fvector_of_pentagon() {
    let fx = Fixture::new();
    let out = assoc(&["fvector", "--diagram", &fx.path("p3.dg")]);
    assert_eq!(json_of(&out), json!({"f": [5, 5, 1]}));
}

#[test]
fn homology_of_cycle() {
    let fx = Fixture::new();
    let out = assoc(&["homology", "--diagram", &fx.path("c3.dg")]);
    assert_eq!(json_of(&out), json!({"H": [{"betti": 1}, {"betti": 0}, {"betti": 0}]}));
}

#[test]
fn support_of_elementary_pair() {
    let fx = Fixture::new();
    let out = assoc(&["support", "--diagram", &fx.path("p3.dg"), "--pair", "1 2 3;1 2;1", "1 2 3;1 2;2"]);
    assert_eq!(json_of(&out), json!({"supp": [1, 2], "zsupp": []}));
}

#[test]
fn envelope_and_determinism() {
    let fx = Fixture::new();
    let args = ["twofaces", "--diagram", &fx.path("p5.dg") as &str, "--json"];
    let a = assoc(&args);
    let b = assoc(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    assert_eq!(doc["command"], "twofaces");
    assert_eq!(doc["fingerprint"].as_str().unwrap().len(), 64);
    let shapes: Vec<&str> = doc["payload"]["twofaces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["type"].as_str().unwrap())
        .collect();
    assert!(!shapes.contains(&"Hexagon"));
    // The fingerprint depends on the diagram only.
    let other = json_of(&assoc(&["fvector", "--diagram", &fx.path("p5.dg"), "--json"]));
    assert_eq!(other["fingerprint"], doc["fingerprint"]);
}

#[test]
fn every_subcommand_emits_json() {
    let fx = Fixture::new();
    let p3 = fx.path("p3.dg");
    let runs: Vec<Vec<&str>> = vec![
        vec!["faces", "--diagram", &p3],
        vec!["faces", "--diagram", &p3, "--dim", "1"],
        vec!["polytope", "--diagram", &p3],
        vec!["homology", "--diagram", &p3, "--dim", "1"],
        vec!["dynkin", "--diagram", &p3, "--dim", "1"],
        vec!["relations", "--diagram", &p3],
        vec!["sequence", "--diagram", &p3, "--pair", "1 2;1", "2 3;3"],
    ];
    for args in runs {
        let doc = json_of(&assoc(&args));
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), doc);
    }
    let faces = json_of(&assoc(&["faces", "--diagram", &p3, "--dim", "1"]));
    assert_eq!(faces["faces"].as_array().unwrap().len(), 5);
    let dynkin = json_of(&assoc(&["dynkin", "--diagram", &p3]));
    assert_eq!(dynkin["cohomology"][0], 0);
    assert_eq!(dynkin["chain_map"], true);
}

#[test]
fn off_export_writes_file() {
    let fx = Fixture::new();
    let off = fx.path("p3.off");
    json_of(&assoc(&["polytope", "--diagram", &fx.path("p3.dg"), "--off", &off]));
    assert!(std::fs::read_to_string(&off).unwrap().starts_with("OFF"));
    let too_big = assoc(&["polytope", "--diagram", &fx.path("p5.dg"), "--off", &off]);
    assert_eq!(too_big.status.code(), Some(1));
}

#[test]
fn coefficient_file() {
    let fx = Fixture::new();
    fx.write("p2.dg", "vertices: 1 2\nedges: 1-2\n");
    let good = fx.write(
        "m.json",
        r#"{"ambient_dim": 2, "subspaces": [{"B": [1, 2], "S": [1, 2], "basis": [["1", "0"]]}]}"#,
    );
    let doc = json_of(&assoc(&["dynkin", "--diagram", &fx.path("p2.dg"), "--coeffs", good.to_str().unwrap()]));
    assert_eq!(doc["ambient_dim"], 2);
    assert_eq!(doc["cohomology"][0], 0);
    let bad = fx.write(
        "bad.json",
        r#"{"ambient_dim": 2, "subspaces": [{"B": [1, 2], "S": [], "basis": [["1", "0"]]}]}"#,
    );
    let out = assoc(&["dynkin", "--diagram", &fx.path("p2.dg"), "--coeffs", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let garbled = fx.write("garbled.json", "{ not json");
    let out = assoc(&["dynkin", "--diagram", &fx.path("p2.dg"), "--coeffs", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let fx = Fixture::new();
    let p3 = fx.path("p3.dg");
    // Not nested: validation error.
    let out = assoc(&["support", "--diagram", &p3, "--pair", "1 2;2 3", "1 2;1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    // Not maximal: validation error.
    assert_eq!(assoc(&["support", "--diagram", &p3, "--pair", "1 2", "1 2;1"]).status.code(), Some(1));
    // Unknown vertex: parse error.
    assert_eq!(assoc(&["support", "--diagram", &p3, "--pair", "1 9;1", "1 2;1"]).status.code(), Some(2));
    // Malformed diagram and unknown subcommand.
    let broken = fx.write("broken.dg", "vertices 1 2\n");
    assert_eq!(assoc(&["fvector", "--diagram", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(assoc(&["nonsense", "--diagram", &p3]).status.code(), Some(2));
    assert_eq!(assoc(&["fvector", "--diagram", &fx.path("missing.dg")]).status.code(), Some(2));
    assert_eq!(assoc(&["faces", "--diagram", &p3, "--dim", "7"]).status.code(), Some(1));
}
