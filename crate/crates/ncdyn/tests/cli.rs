use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use ncdyn::codec::{self, GaugeJson, MatrixJson, SectionJson, UnitJson};
use ncdyn::{run_with_env, CliError};
use serde_json::{json, Value};
use tempfile::TempDir;

fn ncdyn(args: &[&str]) -> Result<String, CliError> {
    run_with_env(std::iter::once("ncdyn").chain(args.iter().copied()), None)
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix(re: &[f64], im: &[f64]) -> Value {
    let n = (re.len() as f64).sqrt() as usize;
    json!({"rows": n, "cols": n, "re": re, "im": im})
}

fn generator() -> Value {
    json!({
        "hamiltonian": matrix(&[1.0, 0.5, 0.5, -1.0], &[0.0, 0.3, -0.3, 0.0]),
        "jumps": [matrix(&[0.0, 0.8, 0.0, 0.0], &[0.0; 4]), matrix(&[0.3, 0.0, 0.2, -0.1], &[0.1, 0.0, 0.0, 0.2])]
    })
}

fn mats() -> Value {
    json!([
        matrix(&[1.0, 2.0, 0.0, -1.0], &[0.5, 0.0, 0.0, 0.0]),
        matrix(&[0.0, 1.0, 1.0, 0.0], &[0.0; 4]),
        matrix(&[0.3, -0.2, 0.7, 1.1], &[0.0, 0.4, -0.4, 0.0]),
        matrix(&[2.0, 0.0, 0.0, 0.5], &[0.0, 1.0, 0.0, 0.0]),
    ])
}

fn parse(out: &str) -> Value {
    serde_json::from_str(out).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["moments"][..],
        &["moments", "--gen", "g.json", "--mats", "m.json"],
        &["interaction-bound", "--minus", "0.5,0.5"],
        &["eig", "--matrix", "m.json", "--unknown"],
        &["frobnicate"],
        &["offwhite", "quasi", "--intervals", "0,1,1", "--refine", "10"],
    ] {
        let e = ncdyn(args).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{args:?}: {e}");
    }
    assert_eq!(ncdyn(&["--help"]).unwrap_err().exit_code(), 0);
    assert_eq!(ncdyn(&["--version"]).unwrap_err().exit_code(), 0);
}

#[test]
fn valid_interaction_command() {
    let out = parse(&ncdyn(&["interaction-bound", "--minus", "0.5,0.5", "--plus", "0.333333,0.333333,0.333334"]).unwrap());
    assert_eq!(out["ncdyn_schema"], 1);
    assert!((out["bound"].as_f64().unwrap() - 10.0 / 9.0).abs() < 1e-5);
    assert_eq!(out["tensor_minus"].as_array().unwrap().len(), 4);
    assert_eq!(out["tensor_plus"].as_array().unwrap().len(), 9);
    let text = ncdyn(&["interaction-bound", "--minus", "1", "--plus", "0.5,0.5"]).unwrap();
    assert!(text.starts_with(r#"{"ncdyn_schema":1,"bound":"#), "{text}");
}

#[test]
fn missing_and_malformed_files() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(ncdyn(&["eig", "--matrix", s(&missing)]).unwrap_err().exit_code(), 3);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(ncdyn(&["eig", "--matrix", s(&bad)]).unwrap_err().exit_code(), 4);
    let nonherm = write(&dir, "nh.json", &matrix(&[1.0, 2.0, 0.0, 1.0], &[0.0; 4]));
    assert_eq!(ncdyn(&["eig", "--matrix", s(&nonherm)]).unwrap_err().exit_code(), 4);
    assert_eq!(ncdyn(&["cp", "stationary", "--spectrum", "0.7,0.2"]).unwrap_err().exit_code(), 4);
    let e = run_with_env(["ncdyn", "interaction-bound", "--minus", "1", "--plus", "1"], Some("x".into())).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn moments_render_worked_example() {
    let dir = TempDir::new().unwrap();
    let gen = write(&dir, "gen.json", &generator());
    let mats = write(&dir, "mats.json", &mats());
    let out = parse(&ncdyn(&["moments", "--gen", s(&gen), "--times", "2,6,3,4", "--mats", s(&mats)]).unwrap());
    assert_eq!(out["rendered"], "P2(a·P1(P3(b)·c·P1(d)))");
    let out = parse(&ncdyn(&["moments", "--gen", s(&gen), "--times", "6,4,2,3", "--mats", s(&mats)]).unwrap());
    assert_eq!(out["rendered"], "P2(P2(P2(a)·b)·c·P1(d))");
}

#[test]
fn discrete_moments_agree_with_word_sum() {
    let dir = TempDir::new().unwrap();
    let gen = write(&dir, "gen.json", &generator());
    let evolved = ncdyn(&["cp", "evolve", "--gen", s(&gen), "--t", "0.7"]).unwrap();
    let map = dir.path().join("map.json");
    fs::write(&map, &evolved).unwrap();
    let two = write(&dir, "two.json", &Value::Array(mats().as_array().unwrap()[..2].to_vec()));
    let a = parse(&ncdyn(&["moments", "--map", s(&map), "--times", "1,2", "--mats", s(&two)]).unwrap());
    let b = parse(&ncdyn(&["dilate", "expect", "--map", s(&map), "--times", "1,2", "--mats", s(&two)]).unwrap());
    let ma: MatrixJson = serde_json::from_value(a["matrix"].clone()).unwrap();
    let mb: MatrixJson = serde_json::from_value(b["matrix"].clone()).unwrap();
    for (x, y) in ma.re.iter().chain(&ma.im).zip(mb.re.iter().chain(&mb.im)) {
        assert!((x - y).abs() < 1e-9);
    }
    let d = parse(&ncdyn(&["dilate", "--map", s(&map)]).unwrap());
    assert!(d["residual"].as_f64().unwrap() < 1e-9);
    assert!(d["unital_defect"].as_f64().unwrap() < 1e-9);
    assert_eq!(d["v"]["rows"].as_u64().unwrap(), 2 * d["r"].as_u64().unwrap());
}

#[test]
fn json_round_trips() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &matrix(&[0.1, 1.0 / 3.0, 1.0 / 3.0, -2.0], &[0.0, 1e-300, -1e-300, 0.0]));
    let eig = ncdyn(&["eig", "--matrix", s(&m)]).unwrap();
    let eig_path = dir.path().join("eig.json");
    fs::write(&eig_path, &eig).unwrap();
    let vectors: MatrixJson = codec::read_json(&eig_path, "vectors").unwrap();
    let again = ncdyn::json::to_string(&vectors).unwrap();
    let back: MatrixJson = serde_json::from_str(&again).unwrap();
    assert_eq!(back, vectors);

    let units = json!([
        {"a": [0.1, -0.7], "zeta": {"re": [1.0, 0.2], "im": [0.0, 0.1]}},
        {"a": [0.0, 0.3], "zeta": {"re": [0.0, 1.0], "im": [0.5, 0.0]}},
        {"a": [1.0 / 7.0, 0.0], "zeta": {"re": [0.0, 0.0], "im": [0.0, 0.0]}}
    ]);
    let parsed: Vec<UnitJson> = serde_json::from_value(units.clone()).unwrap();
    let emitted = ncdyn::json::to_string(&parsed.iter().map(|u| UnitJson::from(&u.to_unit().unwrap())).collect::<Vec<_>>()).unwrap();
    let reread: Vec<UnitJson> = serde_json::from_str(&emitted).unwrap();
    assert_eq!(reread, parsed);
    let up = write(&dir, "u.json", &units);
    let idx = parse(&ncdyn(&["index", "--units", s(&up), "--with", s(&up)]).unwrap());
    assert_eq!(idx["index"], 2);
    assert_eq!(idx["product_index"], 4);

    let g = write(
        &dir,
        "g.json",
        &json!({"lambda": 0.25, "xi": {"re": [1.0, 0.0], "im": [0.0, 2.0]}, "u": matrix(&[0.0, 1.0, 1.0, 0.0], &[0.0; 4])}),
    );
    let inv = ncdyn(&["gauge", "inverse", "--element", s(&g)]).unwrap();
    let inv_path = dir.path().join("inv.json");
    fs::write(&inv_path, &inv).unwrap();
    let prod = parse(&ncdyn(&["gauge", "mul", "--lhs", s(&g), "--rhs", s(&inv_path)]).unwrap());
    let e: GaugeJson = serde_json::from_value(prod["gauge"].clone()).unwrap();
    assert_eq!(e.lambda, 0.0);
    assert!(e.xi.re.iter().chain(&e.xi.im).all(|x| x.abs() < 1e-15));

    let f = write(
        &dir,
        "f.json",
        &json!([
            {"word": [1, "1/2"], "tensors": [[matrix(&[1.0, 0.0, 0.0, 2.0], &[0.0; 4]), matrix(&[0.0, 1.0, 1.0, 0.0], &[0.0; 4])]]},
            {"word": [0], "tensors": [[matrix(&[0.5, 0.5, 0.5, 0.5], &[0.0, 0.1, -0.1, 0.0])]]}
        ]),
    );
    let star = ncdyn(&["freeprod", "star", "--section", s(&f)]).unwrap();
    let star_path = dir.path().join("star.json");
    fs::write(&star_path, &star).unwrap();
    let twice = parse(&ncdyn(&["freeprod", "star", "--section", s(&star_path)]).unwrap());
    let original: SectionJson = codec::read_json(&f, "section").unwrap();
    let back: SectionJson = serde_json::from_value(twice["section"].clone()).unwrap();
    assert_eq!(codec::section_from_json(&back).unwrap(), codec::section_from_json(&original).unwrap());
    let prod = parse(&ncdyn(&["freeprod", "mul", "--lhs", s(&f), "--rhs", s(&star_path)]).unwrap());
    let words: Vec<Value> = prod["section"].as_array().unwrap().iter().map(|t| t["word"].clone()).collect();
    assert!(words.contains(&json!([1, "1/2", 1])));
}

#[test]
fn offwhite_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("gram.csv");
    let summary = parse(
        &ncdyn(&["offwhite", "gram", "--theta", "2", "--delta", "0.05", "--interval", "0,1", "--n", "40", "--out", s(&out)]).unwrap(),
    );
    assert_eq!(summary["n"], 40);
    assert!(summary["min_eigenvalue"].as_f64().unwrap() > 0.0);
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 40);
    assert!(rows.iter().all(|r| r.len() == 40));
    let quasi = ncdyn(&["offwhite", "quasi", "--intervals", "0,1,1,2", "--refine", "10,20"]).unwrap();
    assert!(quasi.starts_with("n,sigma_min,hs_defect\n"));
    assert_eq!(quasi.lines().count(), 3);
    let bad = ncdyn(&["offwhite", "gram", "--theta", "2", "--delta", "0.2", "--interval", "0,1", "--n", "4"]).unwrap_err();
    assert_eq!(bad.exit_code(), 4);
}

#[test]
fn sweeps_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let specs = [
        json!({"kind": "weyl", "dim": 4, "samples": 20}),
        json!({"kind": "oracle", "samples": 10, "max_rank": 3, "max_len": 3, "t_max": 4}),
        json!({"kind": "interaction", "max_q": 5}),
        json!({"kind": "quasi", "theta": 2, "intervals": [[0, 1], [1, 2]], "refine": [10, 20]}),
    ];
    for (i, spec) in specs.iter().enumerate() {
        let p = write(&dir, &format!("sweep{i}.json"), spec);
        let a = ncdyn(&["sweep", "--spec", s(&p), "--seed", "7"]).unwrap();
        let b = ncdyn(&["sweep", "--spec", s(&p), "--seed", "7"]).unwrap();
        assert_eq!(a, b);
        let env = run_with_env(["ncdyn", "sweep", "--spec", s(&p), "--seed", "1"], Some("7".into())).unwrap();
        assert_eq!(env, a);
    }
    let weyl = write(&dir, "w.json", &specs[0]);
    let a = ncdyn(&["sweep", "--spec", s(&weyl), "--seed", "7"]).unwrap();
    let b = ncdyn(&["sweep", "--spec", s(&weyl), "--seed", "8"]).unwrap();
    assert_ne!(a, b);
    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["sample", "l1_distance", "trace_distance", "slack"]);
    for r in rdr.records() {
        assert!(r.unwrap()[3].parse::<f64>().unwrap() >= -1e-12);
    }
    let unknown = write(&dir, "u.json", &json!({"kind": "nope"}));
    assert_eq!(ncdyn(&["sweep", "--spec", s(&unknown)]).unwrap_err().exit_code(), 4);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_ncdyn");
    let ok = Command::new(bin).args(["interaction-bound", "--minus", "0.5,0.5", "--plus", "1"]).env_remove("NCDYN_SEED").output().unwrap();
    assert!(ok.status.success());
    assert!(ok.stderr.is_empty());
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with(r#"{"ncdyn_schema":1"#));
    let usage = Command::new(bin).arg("moments").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(usage.stdout.is_empty());
    let missing = Command::new(bin).args(["eig", "--matrix", "/nonexistent/m.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(3));
    assert!(!missing.stderr.is_empty());
    let dir = TempDir::new().unwrap();
    let io = Command::new(bin)
        .args(["offwhite", "gram", "--theta", "2", "--interval", "0,1", "--n", "4", "--out"])
        .arg(dir.path().join("missing-dir").join("g.csv"))
        .output()
        .unwrap();
    assert_eq!(io.status.code(), Some(5));
}
