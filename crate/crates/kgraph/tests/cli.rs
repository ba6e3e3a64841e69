//! Behaviour of the `kgraph` binary: exit codes, report shapes, and
//! the file-format round trip.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use kgraph::fixtures::{corpus_acyclic, corpus_cyclic};
use kgraph::io::{load_graph, save_graph};
use kgraph::random::{random_kgraph, RandomSpec};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kgraph"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

fn report(stdout: &str) -> Value {
    serde_json::from_str(stdout.trim()).expect("report is JSON")
}

fn fixture_file(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let (code, _, _) = run(&["fixture", name, "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "writing fixture {name}");
    path
}

fn arg(path: &PathBuf) -> &str {
    path.to_str().unwrap()
}

#[test]
fn contract_examples() {
    let dir = tempfile::tempdir().unwrap();
    let loops11 = fixture_file(&dir, "loops-1-1");
    let omega21 = fixture_file(&dir, "omega-2-1-1");

    let (code, out, _) = run(&[
        "efficient-check",
        arg(&loops11),
        "--collection",
        r#"{"members":[["a"],["b"]]}"#,
    ]);
    assert_eq!(code, 0, "{out}");
    let r = report(&out);
    assert_eq!(r["ok"], true);
    assert_eq!(r["efficient"], true);

    let (code, out, _) = run(&["bijection-verify", arg(&omega21)]);
    assert_eq!(code, 0, "{out}");
    let r = report(&out);
    assert_eq!(r["summary"], "efficient = satiated = 8");
    assert_eq!(r["efficient"], 8);
    assert_eq!(r["satiated"], 8);

    let (code, out, _) = run(&["boundary", arg(&loops11)]);
    assert_eq!(code, 2, "{out}");
    let r = report(&out);
    assert_eq!(r["ok"], false);
    assert!(r["error"].as_str().unwrap().contains("acyclic"));
}

#[test]
fn validation_reports() {
    let dir = tempfile::tempdir().unwrap();
    let omega21 = fixture_file(&dir, "omega-2-1-1");

    let (code, out, _) = run(&["validate", arg(&omega21)]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["rank"], 2);
    assert_eq!(r["vertices"], 4);
    assert_eq!(r["edges"], 4);
    assert_eq!(r["squares"], 1);

    // A composable two-colour pair without a factorisation square.
    let broken = dir.path().join("missing-square.json");
    fs::write(
        &broken,
        r#"{"k":2,"vertices":["v"],"edges":[
            {"id":"a","color":1,"range":"v","source":"v"},
            {"id":"b","color":2,"range":"v","source":"v"}],"squares":[]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["validate", arg(&broken)]);
    assert_eq!(code, 1, "{out}");
    let r = report(&out);
    assert_eq!(r["ok"], false);
    let issues = r["issues"].as_array().unwrap();
    assert!(issues
        .iter()
        .any(|i| i.as_str().unwrap().contains("square")));

    // Everything downstream of loading refuses the broken file.
    let (code, out, _) = run(&["props", arg(&broken)]);
    assert_eq!(code, 2, "{out}");
    assert_eq!(report(&out)["ok"], false);

    let (code, out, _) = run(&["validate", arg(&dir.path().join("absent.json"))]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn refutation_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let loops11 = fixture_file(&dir, "loops-1-1");
    let fork = fixture_file(&dir, "fork");
    let twisted = fixture_file(&dir, "loops-twisted");

    let (code, out, _) = run(&[
        "efficient-check",
        arg(&loops11),
        "--collection",
        r#"{"members":[["a"],["a","b"]]}"#,
    ]);
    assert_eq!(code, 1, "{out}");
    let r = report(&out);
    assert_eq!(r["efficient"], false);
    assert_eq!(r["violated"], "antichain");

    let (code, out, _) = run(&["exhaustive", arg(&fork), "--set", r#"{"edges":["p"]}"#]);
    assert_eq!(code, 1, "{out}");
    let r = report(&out);
    assert_eq!(r["exhaustive"], false);
    assert_eq!(r["witness"], "q");

    let (code, out, _) = run(&[
        "efficient-check",
        arg(&twisted),
        "--collection",
        r#"{"members":[["a1","a2"],["b1","b2"]]}"#,
    ]);
    assert_eq!(code, 1, "{out}");
    let r = report(&out);
    assert_eq!(r["violated"], "substitution");
    assert!(r["certificate"].as_str().unwrap().contains("substituting"));
}

#[test]
fn precondition_failures() {
    let dir = tempfile::tempdir().unwrap();
    let loops11 = fixture_file(&dir, "loops-1-1");
    let twisted = fixture_file(&dir, "loops-twisted");

    // Boundary machinery wants an efficient collection.
    let (code, out, _) = run(&[
        "boundary",
        arg(&twisted),
        "--collection",
        r#"{"members":[["a1","a2"],["b1","b2"]]}"#,
    ]);
    assert_eq!(code, 2, "{out}");
    assert!(report(&out)["error"]
        .as_str()
        .unwrap()
        .contains("not efficient"));

    // Cycles plus sources leave a bounded search inconclusive.
    let undecidable = dir.path().join("cyclic-source.json");
    fs::write(
        &undecidable,
        r#"{"k":1,"vertices":["u","w"],"edges":[
            {"id":"e","color":1,"range":"u","source":"u"},
            {"id":"f","color":1,"range":"u","source":"w"}],"squares":[]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&[
        "exhaustive",
        arg(&undecidable),
        "--set",
        r#"{"vertex":"u","paths":[["e"],["f"]]}"#,
        "--bound",
        "3",
    ]);
    assert_eq!(code, 2, "{out}");
    assert_eq!(report(&out)["exhaustive"], "unknown");

    let (code, out, _) = run(&["efficient-check", arg(&loops11), "--collection", "{bad"]);
    assert_eq!(code, 2, "{out}");

    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());

    let (code, out, _) = run(&["fixture", "no-such-graph"]);
    assert_eq!(code, 2, "{out}");
    assert!(report(&out)["error"]
        .as_str()
        .unwrap()
        .contains("unknown fixture"));
}

#[test]
fn at_file_literals() {
    let dir = tempfile::tempdir().unwrap();
    let loops11 = fixture_file(&dir, "loops-1-1");
    let literal = r#"{"members":[["a"],["b"]]}"#;
    let file = dir.path().join("collection.json");
    fs::write(&file, literal).unwrap();

    let (code_inline, out_inline, _) =
        run(&["efficient-check", arg(&loops11), "--collection", literal]);
    let indirect = format!("@{}", file.display());
    let (code_file, out_file, _) =
        run(&["efficient-check", arg(&loops11), "--collection", &indirect]);
    assert_eq!(code_inline, 0);
    assert_eq!(code_file, 0);
    assert_eq!(report(&out_inline), report(&out_file));
}

#[test]
fn round_trip_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for f in corpus_acyclic().iter().chain(corpus_cyclic().iter()) {
        let a = dir.path().join(format!("{}-a.json", f.name));
        let b = dir.path().join(format!("{}-b.json", f.name));
        save_graph(&a, &f.graph.to_data()).unwrap();
        let (data, _) = load_graph(&a).unwrap();
        save_graph(&b, &data).unwrap();
        assert_eq!(
            fs::read_to_string(&a).unwrap(),
            fs::read_to_string(&b).unwrap(),
            "round trip changed {}",
            f.name
        );
        let (code, _, _) = run(&["validate", a.to_str().unwrap()]);
        assert_eq!(code, 0, "fixture {} fails validate", f.name);
    }
}

#[test]
fn round_trip_random_graphs() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0u64..100 {
        let k = 1 + (seed % 3) as usize;
        let density = match (seed / 9) % 3 {
            0 => 0.3,
            1 => 0.5,
            _ if k == 3 => 0.5,
            _ => 0.7,
        };
        let spec = RandomSpec {
            k,
            vertices: 2 + ((seed / 3) % 3) as usize,
            density,
            seed,
            acyclic: seed % 2 == 0,
        };
        let (data, _) = random_kgraph(&spec).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let a = dir.path().join(format!("r{seed}-a.json"));
        let b = dir.path().join(format!("r{seed}-b.json"));
        save_graph(&a, &data).unwrap();
        let (reloaded, _) = load_graph(&a).unwrap();
        save_graph(&b, &reloaded).unwrap();
        assert_eq!(
            fs::read_to_string(&a).unwrap(),
            fs::read_to_string(&b).unwrap(),
            "round trip changed the random graph for seed {seed}"
        );
    }
}

#[test]
fn generation_behaviour() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--k", "2", "--vertices", "3", "--density", "0.6", "--seed", "7"];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(out1, out2, "generation must be deterministic per seed");

    let (_, out3, _) = run(&["gen", "--k", "1", "--vertices", "4", "--density", "0.7", "--seed", "3"]);
    let data: Value = serde_json::from_str(out3.trim()).unwrap();
    assert_eq!(data["k"], 1);
    assert_eq!(data["squares"].as_array().unwrap().len(), 0);

    let target = dir.path().join("gen.json");
    let (code, out, _) = run(&[
        "gen", "--k", "3", "--vertices", "3", "--density", "0.4", "--seed", "5", "--acyclic",
        "--out", target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["validate", target.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["props", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["acyclic"], true);
}

#[test]
fn subcommand_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let omega21 = fixture_file(&dir, "omega-2-1-1");
    let loops11 = fixture_file(&dir, "loops-1-1");
    let corner = r#"{"members":[{"vertex":"0_0","edges":["c1_0_0","c2_0_0"]}]}"#;

    let (code, out, _) = run(&["props", arg(&omega21)]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["acyclic"], true);
    assert_eq!(r["has_sources"], true);

    let (code, out, _) = run(&["fe", arg(&omega21)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["total"], 5);

    let (code, out, _) = run(&[
        "ext",
        arg(&omega21),
        "--path",
        "0_0",
        "--set",
        r#"{"vertex":"0_0","edges":["c1_0_0","c2_0_0"]}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["ext"]["edges"].as_array().unwrap().len(), 2);

    let (code, out, _) = run(&["hat", arg(&omega21), "--collection", corner]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["count"], 1);

    let (code, out, _) = run(&[
        "min",
        arg(&omega21),
        "--collection",
        r#"{"members":[["c1_0_0"],["c1_0_0","c2_0_0"]]}"#,
        "--edges-only",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["count"], 1);

    let (code, out, _) = run(&["satiate", arg(&omega21), "--collection", corner]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["count"], 2);

    let (code, out, _) = run(&["rep-verify", arg(&omega21)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["dimension"], 9);

    let (code, out, _) = run(&["boundary", arg(&omega21)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["count"], 9);

    let (code, out, _) = run(&[
        "hat-oracle",
        arg(&omega21),
        "--collection",
        corner,
        "--set",
        r#"{"vertex":"0_0","edges":["c1_0_0","c2_0_0"]}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["in_hat"], true);

    let (code, out, _) = run(&["ideals", arg(&omega21)]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["count"], 16);
    assert_eq!(r["labels"].as_array().unwrap().len(), 16);

    let (code, out, _) = run(&[
        "toeplitz",
        arg(&loops11),
        "--colors",
        "1",
        "--intersect-with",
        "2",
    ]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["colors"], serde_json::json!([1, 2]));
    assert_eq!(r["efficient"], true);

    let (code, out, _) = run(&["export-dot", arg(&omega21)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));

    let (code, out, _) = run(&["fixture", "--list"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["fixtures"].as_array().unwrap().len(), 29);
}
