use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn stodom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stodom")).args(args).output().expect("binary runs")
}

fn record(args: &[&str]) -> Value {
    let out = stodom(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn validate(schema_file: &str, instance: &Value) {
    let path = schema_dir().join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn measure_file() -> PathBuf {
    let path = std::env::temp_dir().join(format!("stodom-mu-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"n": 2, "weights": [0.1, 0.2, 0.2, 0.5]}"#).unwrap();
    path
}

#[test]
fn payloads_match_shipped_schemas() {
    let mu = measure_file();
    let mu = mu.to_str().unwrap();
    let u = "0.4,0.1,0.4";
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("dom_check", vec!["dom", "check", "--mu", mu, "--nu", "product:0.3"]),
        ("dom_upsets", vec!["dom", "upsets", "--n", "3"]),
        ("dom_fkg", vec!["dom", "fkg", "--mu", mu]),
        ("exch_fkg", vec!["exch", "fkg", "--u", u]),
        ("exch_dominates", vec!["exch", "dominates", "--u", u, "--rho", "0.3"]),
        ("exch_tail", vec!["exch", "tail", "--u", u, "--rho", "0.3"]),
        ("exch_maxrho", vec!["exch", "maxrho", "--u", u]),
        ("exch_conditional", vec!["exch", "conditional", "--u", u]),
        ("exch_extendible", vec!["exch", "extendible", "--u", u]),
        ("exch_uvector", vec!["exch", "uvector", "--atoms", "0.25:0.5,0.75:0.5", "--n", "3"]),
        ("contact_an", vec!["contact", "an", "--beta", "6", "--n", "2", "--reps", "200", "--seed", "1"]),
        ("contact_rho_interval", vec!["contact", "rho-interval", "--beta", "6", "--max-block", "2", "--reps", "200", "--seed", "1"]),
        ("contact_star", vec!["contact", "star", "--lambda", "8", "--n-star", "1", "--reps", "200", "--seed", "1"]),
        ("contact_star", vec!["contact", "star", "--lambda", "8", "--n-star", "0", "--reps", "200", "--seed", "1", "--probe-rho", "0.3"]),
        ("contact_rectangle", vec!["contact", "rectangle", "--lambda", "3", "--rho", "0.2", "--n", "2", "--t", "1", "--reps", "200", "--seed", "1"]),
        ("contact_crossover", vec!["contact", "crossover", "--lambda", "3", "--rho", "0.2"]),
        ("contact_renewal", vec!["contact", "renewal", "--beta", "4", "--n", "0"]),
        ("contact_conditionals", vec!["contact", "conditionals", "--max-l", "2", "--beta", "6", "--reps", "200", "--seed", "1"]),
        ("contact_two_sided", vec!["contact", "two-sided", "--k", "1", "--l", "1", "--beta", "6", "--reps", "200", "--seed", "1"]),
        ("ising_tree_tpoint", vec!["ising", "tree", "tpoint", "--J", "1"]),
        ("ising_tree_matrices", vec!["ising", "tree", "matrices", "--J", "1"]),
        ("ising_tree_alpha", vec!["ising", "tree", "alpha", "--J2", "0.6"]),
        ("ising_tree_rho", vec!["ising", "tree", "rho", "--J", "1", "--state", "free"]),
        ("ising_z2_rho", vec!["ising", "z2", "rho", "--J", "0.3"]),
        ("ising_z2_blockrate", vec!["ising", "z2", "blockrate", "--J", "0.3", "--n", "2", "--L", "16", "--sweeps", "2000", "--burn-in", "100", "--seed", "1"]),
        ("ising_z2_probe_pm", vec!["ising", "z2", "probe-pm", "--J", "0.3", "--n", "2", "--L", "16", "--sweeps", "2000", "--burn-in", "100", "--seed", "1"]),
        ("perc_run", vec!["perc", "run", "--source", "product", "--rho", "0.6", "--L", "16", "--reps", "100", "--seed", "1"]),
        ("perc_run", vec!["perc", "run", "--source", "ising", "--J", "0.6", "--sweeps", "20", "--L", "16", "--reps", "100", "--seed", "1"]),
    ];
    for (schema, args) in cases {
        let rec = record(&args);
        validate("run_record.schema.json", &rec);
        validate(&format!("{schema}.schema.json"), &rec["result"]);
    }
}

#[test]
fn documented_examples() {
    let rec = record(&["exch", "maxrho", "--atoms", "0.25:0.5,0.75:0.5", "--n", "2"]);
    let rho = rec["result"]["rho_max"].as_f64().unwrap();
    assert!((rho - (1.0 - (5.0f64 / 16.0).sqrt())).abs() < 1e-12);

    let rec = record(&["ising", "tree", "alpha", "--J2", "0.6093779"]);
    assert!(rec["result"]["alpha"].as_f64().unwrap().abs() < 1e-6);

    let mu = measure_file();
    let rec = record(&["dom", "check", "--mu", mu.to_str().unwrap(), "--nu", "product:0.3"]);
    assert!(rec["result"]["dominates"].is_boolean());
    assert_eq!(rec["command"], "dom check");
    assert!(rec["seed"].is_null());
}

#[test]
fn seeded_runs_replay_exactly() {
    let args = ["contact", "an", "--beta", "6", "--n", "1", "--reps", "150", "--seed", "11"];
    let a = record(&args);
    let b = record(&args);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["seed"], 11);

    let mut one_thread = vec!["--threads", "1"];
    one_thread.extend(args);
    assert_eq!(record(&one_thread)["result"], a["result"]);
}

#[test]
fn exit_codes() {
    assert_eq!(stodom(&["bogus"]).status.code(), Some(1));
    assert_eq!(stodom(&["ising", "tree", "alpha", "--J2", "0.3"]).status.code(), Some(2));
    assert_eq!(stodom(&["contact", "an", "--beta", "6", "--n", "1", "--reps", "5", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(stodom(&["exch", "maxrho", "--u", "0.1,0.4,0.1"]).status.code(), Some(4));
    // randomized commands refuse to run without a seed
    assert_ne!(stodom(&["contact", "an", "--beta", "6", "--n", "1", "--reps", "100"]).status.code(), Some(0));
}

#[test]
fn csv_is_a_projection_of_the_payload() {
    let json = record(&["contact", "crossover", "--lambda", "3", "--rho", "0.2", "--grid", "4,6"]);
    let out = stodom(&["--csv", "contact", "crossover", "--lambda", "3", "--rho", "0.2", "--grid", "4,6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "contact_factor,flip_below,flip_value,n");
    assert_eq!(lines.len(), 3);
    let flip = json["result"]["rows"][1]["flip_value"].as_f64().unwrap();
    let csv_flip: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(flip, csv_flip);
}
