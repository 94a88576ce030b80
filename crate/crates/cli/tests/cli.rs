use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::{Command, Output};

use partsep::bound::{bilinear_value, Bipartition, ResponseAssignment};
use partsep::hv_model::{HybridModel, HybridModelDocument};
use partsep::CoefficientTensor;
use partsep::SignVariant;
use serde_json::{json, Value};

fn partsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn result_of(args: &[&str]) -> Value {
    let out = partsep(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    assert_eq!(doc["manifest"]["command"], args[0]);
    doc["result"].clone()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn gen_four_particles() {
    let r = result_of(&["gen", "--n", "4", "--variant", "plus"]);
    let entries = r["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 16);
    for e in entries {
        let t = e["settings"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|s| s.as_u64() == Some(2))
            .count();
        let expect = if [0, 3, 4].contains(&t) { 1 } else { -1 };
        assert_eq!(e["sign"].as_i64().unwrap(), expect);
    }
}

#[test]
fn gen_csv() {
    let out = partsep(&["gen", "--n", "2", "--variant", "plus", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# manifest: "));
    assert_eq!(lines[1], "settings,t,sign");
    assert_eq!(&lines[2..], ["11,0,1", "21,1,-1", "12,1,-1", "22,2,-1"]);
}

#[test]
fn exit_codes() {
    assert_eq!(partsep(&["gen", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        partsep(&["bound", "--n", "3", "--partition", "1,9"]).status.code(),
        Some(2)
    );
    assert_eq!(partsep(&["minimax", "--n", "5"]).status.code(), Some(1));
    assert_eq!(
        partsep(&["bound", "--n", "20", "--partition", "all"]).status.code(),
        Some(1)
    );
    assert_eq!(partsep(&["certify", "/nonexistent/counts.json"]).status.code(), Some(2));
}

#[test]
fn bound_all_partitions_four_particles() {
    let r = result_of(&["bound", "--n", "4", "--variant", "plus", "--partition", "all"]);
    let parts = r["partitions"].as_array().unwrap();
    assert_eq!(parts.len(), 7);
    for p in parts {
        assert_eq!(p["m_sigma"], 8);
        assert_eq!(p["mhat"], 8);
        assert_eq!(p["minimal"], true);
    }
    assert_eq!(r["bound"], 8);
}

#[test]
fn bound_with_witness() {
    let r = result_of(&["bound", "--n", "3", "--variant", "plus", "--partition", "1,2"]);
    let p = &r["partitions"][0];
    assert_eq!(p["m_sigma"], 4);
    let ints = |v: &Value| -> Vec<i8> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_i64().unwrap() as i8)
            .collect()
    };
    let part = Bipartition::new(3, &[1, 2]).unwrap();
    let resp = ResponseAssignment::new(&part, ints(&p["witness"]["xi"]), ints(&p["witness"]["eta"])).unwrap();
    let coeffs = CoefficientTensor::alternating(3, SignVariant::Plus).unwrap();
    assert_eq!(bilinear_value(&coeffs, &part, &resp).unwrap(), 4);
}

#[test]
fn bound_custom_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ones.json");
    let entries: Vec<Value> = (0..8)
        .map(|c: u32| json!({"settings": (0..3).map(|k| 1 + (c >> k & 1)).collect::<Vec<_>>(), "sign": 1}))
        .collect();
    std::fs::write(&path, json!({"n": 3, "entries": entries}).to_string()).unwrap();
    let r = result_of(&["bound", "--tensor", path_str(&path)]);
    assert_eq!(r["bound"], 8);

    // a gen output document is accepted as is
    let gen = dir.path().join("gen.json");
    assert!(
        partsep(&["gen", "--n", "3", "--variant", "minus", "--out", path_str(&gen)])
            .status
            .success()
    );
    let r = result_of(&["bound", "--tensor", path_str(&gen)]);
    assert_eq!(r["bound"], 4);
    assert_eq!(r["tensor"], "custom (minus)");
}

#[test]
fn mu_listings() {
    let r = result_of(&["mu", "--n", "2", "--p", "1"]);
    assert_eq!(r["count"], 2);
    let r = result_of(&["mu", "--n", "8", "--p", "3"]);
    let alternating = r["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["alternating"] == true)
        .count();
    assert_eq!(alternating, 2);
}

#[test]
fn minimax_three() {
    let r = result_of(&["minimax", "--n", "3"]);
    assert_eq!(r["m"], 4);
    let alt = r["alternating_minimizers"].as_array().unwrap();
    assert!(alt.contains(&json!("plus")) && alt.contains(&json!("minus")));
}

#[test]
fn violate_examples() {
    let r = result_of(&["violate", "--n", "3", "--variant", "plus", "--angles", "optimal"]);
    assert!((r["value"].as_f64().unwrap() - 4.0 * SQRT_2).abs() < 1e-9);
    assert!((r["ratio"].as_f64().unwrap() - SQRT_2).abs() < 1e-9);
    assert_eq!(r["bound_partial"], 4.0);

    let r = result_of(&["violate", "--n", "2", "--angles", "optimal"]);
    assert!((r["value"].as_f64().unwrap() - 2.0 * SQRT_2).abs() < 1e-9);

    let r = result_of(&["violate", "--n", "5", "--angles", "optimize", "--seed", "7"]);
    assert!((r["value"].as_f64().unwrap() - 16.0 * SQRT_2).abs() < 1e-6);
    assert_eq!(r["seed"], 7);

    let r = result_of(&["violate", "--n", "3", "--ghz-sign", "minus"]);
    assert!((r["value"].as_f64().unwrap() + 4.0 * SQRT_2).abs() < 1e-9);
}

#[test]
fn violate_angle_files() {
    let dir = tempfile::tempdir().unwrap();
    let deg = dir.path().join("deg.json");
    std::fs::write(
        &deg,
        json!({"n": 2, "angles": [[45.0, 135.0], [0.0, 90.0]]}).to_string(),
    )
    .unwrap();
    let r = result_of(&["violate", "--n", "2", "--angles", path_str(&deg), "--degrees"]);
    assert!((r["value"].as_f64().unwrap() - 2.0 * SQRT_2).abs() < 1e-9);

    // the angles of a previous report can be replayed
    let prev = dir.path().join("prev.json");
    assert!(
        partsep(&["violate", "--n", "4", "--angles", "optimize", "--out", path_str(&prev)])
            .status
            .success()
    );
    let r = result_of(&["violate", "--n", "4", "--angles", path_str(&prev)]);
    assert!((r["value"].as_f64().unwrap() - 8.0 * SQRT_2).abs() < 1e-6);

    assert_eq!(
        partsep(&["violate", "--n", "3", "--angles", path_str(&deg)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_deterministic_model() {
    let dir = tempfile::tempdir().unwrap();
    let part = Bipartition::new(3, &[1]).unwrap();
    let resp = ResponseAssignment::new(&part, vec![1, -1], vec![1, -1, -1, 1]).unwrap();
    let model = HybridModel::deterministic(&part, &resp).unwrap();
    let path = dir.path().join("model.json");
    std::fs::write(
        &path,
        serde_json::to_string(&HybridModelDocument::from(&model)).unwrap(),
    )
    .unwrap();
    let r = result_of(&["simulate", "--model", path_str(&path), "--shots", "200", "--seed", "3"]);
    for e in r["correlations"]["entries"].as_array().unwrap() {
        let v = e["value"].as_f64().unwrap();
        assert!(v == 1.0 || v == -1.0);
    }
    for ineq in r["inequalities"].as_array().unwrap() {
        let v = ineq["value"].as_f64().unwrap();
        assert_eq!(v, ineq["exact"].as_f64().unwrap());
        assert_eq!(v, v.round());
        assert!(v.abs() <= 4.0);
    }
}

#[test]
fn invalid_model_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let part = Bipartition::new(2, &[1]).unwrap();
    let model = HybridModel::uniform(&part).unwrap();
    let mut doc = serde_json::to_value(HybridModelDocument::from(&model)).unwrap();
    doc["subensembles"][0]["weight"] = json!(0.9);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = partsep(&["simulate", "--model", path_str(&path), "--shots", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights"));
}

#[test]
fn certify_ghz_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim.json");
    assert!(partsep(&[
        "simulate",
        "--ghz",
        "--n",
        "3",
        "--shots",
        "100000",
        "--seed",
        "11",
        "--out",
        path_str(&sim)
    ])
    .status
    .success());
    let out = partsep(&["certify", path_str(&sim)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("violates partial separability"));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &r["result"];
    assert_eq!(r["violates_partial_separability"], true);
    assert_eq!(r["bound"], 4.0);
    let variants: Vec<&str> = r["variants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["variant"].as_str().unwrap())
        .collect();
    assert_eq!(variants, ["plus", "minus"]);
    assert!(r["variants"][0]["z_score"].as_f64().unwrap() > 5.0);
    assert!((r["variants"][0]["value"].as_f64().unwrap() - 5.657).abs() < 0.05);
}

#[test]
fn certify_missing_setting() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim.json");
    assert!(partsep(&[
        "simulate",
        "--ghz",
        "--n",
        "3",
        "--shots",
        "100",
        "--out",
        path_str(&sim)
    ])
    .status
    .success());
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&sim).unwrap()).unwrap();
    let counts = doc["result"]["counts"].clone();
    let mut data = counts["data"].as_array().unwrap().clone();
    data.retain(|e| e["settings"] != json!([2, 1, 2]));
    doc = json!({"n": 3, "shots": 100, "data": data});
    let path = dir.path().join("partial.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = partsep(&["certify", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing settings: 212"));
}

#[test]
fn replay_is_identical() {
    let args = ["simulate", "--ghz", "--n", "3", "--shots", "5000", "--seed", "99"];
    assert_eq!(result_of(&args), result_of(&args));
    let args = [
        "violate",
        "--n",
        "4",
        "--angles",
        "optimize",
        "--seed",
        "3",
        "--restarts",
        "4",
    ];
    assert_eq!(result_of(&args), result_of(&args));
}

#[test]
fn manifest_contents() {
    let out = partsep(&["violate", "--n", "3", "--seed", "5"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &doc["manifest"];
    assert_eq!(m["params"]["n"], 3);
    assert_eq!(m["params"]["variant"], "plus");
    assert_eq!(m["seeds"], json!([5]));
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = partsep(&[
        "mu",
        "--n",
        "4",
        "--p",
        "2",
        "--format",
        "csv",
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().nth(1), Some("mu,nu,alternating"));
}
