use std::path::PathBuf;
use std::process::{Command, Output};

use congforge::commands::{generate_bundle, GenKind};
use congforge::format::{Document, Payload};
use congforge_core::generate::GenConfig;
use congforge_core::tuple::SymmetryTag;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congforge"))
        .args(args)
        .env_remove("CONGFORGE_SEED")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn root_of_diag_4_9_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("root.json");
    let out = run(&["root", &fixture("diag_4_9.json"), "--m", "2", "--json", "-o", dest.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = summary["coefficients"].as_array().unwrap();
    assert!((c[0][0].as_f64().unwrap() - 1.2).abs() < 1e-12);
    assert!((c[1][0].as_f64().unwrap() - 0.2).abs() < 1e-12);
    let doc = Document::parse(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(doc.kind(), "root_result");
}

#[test]
fn inverse_root_flag() {
    let out = run(&["root", &fixture("diag_4_9.json"), "--m", "2", "--inverse"]);
    assert_eq!(code(&out), 0);
    let doc = Document::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Payload::RootResult(r) = doc.payload else { panic!("expected a root result") };
    assert!(r.inverse);
}

#[test]
fn verify_json_lists_every_file() {
    let out = run(&[
        "verify",
        "--relation",
        "sym-equiv",
        "--json",
        "--jobs",
        "2",
        &fixture("identity_bundle.json"),
        &fixture("tuple_n4_t2_symmetric_seed7.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let runs = v.as_array().unwrap();
    assert_eq!(runs.len(), 2);
    assert!(runs.iter().all(|r| r["report"]["passed"] == Value::Bool(true)));
}

#[test]
fn worst_exit_code_wins() {
    let out = run(&[
        "verify",
        "--relation",
        "congruence",
        &fixture("identity_bundle.json"),
        &fixture("perturbed_bundle.json"),
        &fixture("shape_mismatch_bundle.json"),
    ]);
    assert_eq!(code(&out), 2);
    let out = run(&["verify", "--relation", "congruence", &fixture("perturbed_bundle.json")]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("<-- FAIL"));
}

#[test]
fn symmetrized_witness_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let bundle = fixture("tuple_n4_t2_symmetric_seed7.json");
    assert_eq!(code(&run(&["symmetrize", &bundle, "-o", s.to_str().unwrap()])), 0);
    let out = run(&["verify", "--relation", "congruence", &bundle, "--witness", s.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let via = dir.path().join("via.json");
    let map = fixture("map_k3_exponents_1_1_-2_seed5.json");
    assert_eq!(code(&run(&["symmetrize", &map, "-o", via.to_str().unwrap()])), 0);
    let out = run(&["verify", "--relation", "map-congruence", &map, "--witness", via.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn real_obstruction_names_the_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("o.json");
    let out = run(&["symmetrize", &fixture("obstruction_real.json"), "-o", dest.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("obstructing eigenvalues"));
    let out = run(&["symmetrize", &fixture("obstruction_real.json"), "--branch", "principal", "-o", dest.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn mix_swaps_the_tuple() {
    let out = run(&["mix", &fixture("tuple_pair.json"), &fixture("lambda_swap.json")]);
    assert_eq!(code(&out), 0);
    let doc = Document::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Payload::Tuple(t) = doc.payload else { panic!("expected a tuple") };
    assert_eq!(t.mats()[0][(0, 1)].re, 1.0);
    assert_eq!(t.mats()[1][(0, 1)].re, 2.0);
}

#[test]
fn gen_is_reproducible_from_seed_or_env() {
    let args = ["gen", "--kind", "tuple", "--n", "3", "--t", "2", "--sym", "skew", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_congforge"))
        .args(["gen", "--kind", "tuple", "--n", "3", "--t", "2", "--sym", "skew"])
        .env("CONGFORGE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed 42"));
    assert_eq!(code(&run(&["gen", "--kind", "tuple"])), 2);
}

#[test]
fn library_generation_matches_fixture() {
    let cfg = GenConfig { n: 2, t: 1, symmetry: SymmetryTag::Symmetric, ..GenConfig::new(1) };
    let fresh = Document::new(cfg.mode, Payload::InstanceBundle(Box::new(generate_bundle(GenKind::Tuple, &cfg).unwrap())));
    let stored = std::fs::read_to_string(fixture("tuple_n2_t1_symmetric_seed1.json")).unwrap();
    assert_eq!(fresh.print(), stored);
}

#[test]
fn every_fixture_round_trips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = Document::parse(&text).unwrap();
        assert_eq!(doc.print(), text, "{}", path.display());
        assert_eq!(Document::parse(&doc.print()).unwrap(), doc);
    }
}
