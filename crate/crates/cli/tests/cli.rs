use std::process::{Command, Output};

use serde_json::Value;

fn trimetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn compute_unit_disk() {
    let out = trimetric(&["compute", "--domain", "unit-disk", "--z1", "0,0", "--z2", "0.5,0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!((f(&doc["results"]["s"]) - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(f(&doc["summary"]["psi"]), 0.0);
    assert_eq!(f(&doc["results"]["tanh_half_rho"]), 0.5);
    assert_eq!(f(&doc["results"]["ellipse"]["ellipse"]["distance_sum"]), 1.5);
    for key in ["config", "results", "summary", "violations"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn compute_polygon() {
    let out = trimetric(&[
        "compute",
        "--domain",
        "polygon",
        "--vertices",
        "-1,-1;1,-1;1,1;-1,1",
        "--z1",
        "-0.5,0",
        "--z2",
        "0.5,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!((f(&doc["results"]["s"]) - 0.5).abs() < 1e-12);
    assert!((f(&doc["results"]["supporting_half_plane_sup"]) - 0.5).abs() < 1e-12);
}

#[test]
fn compute_other_domains() {
    let out = trimetric(&["compute", "--domain", "half-plane", "--z1", "0,1", "--z2", "2,1"]);
    let doc = json(&out);
    assert!((f(&doc["results"]["s"]) - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(f(&doc["results"]["contact"]["witness"]["re"]), 1.0);

    let out = trimetric(&["compute", "--domain", "disk", "--center", "1,1", "--radius", "2", "--z1", "1,1", "--z2", "2,1"]);
    let doc = json(&out);
    assert!((f(&doc["results"]["s"]) - 1.0 / 3.0).abs() < 1e-15);
    assert!((f(&doc["results"]["tanh_half_rho"]) - 0.5).abs() < 1e-15);
}

#[test]
fn compute_with_general_automorphism() {
    let out = trimetric(&["compute", "--z1", "0.1,0.2", "--z2", "-0.3,0.5", "--z0", "0.2,0.5", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let d = &doc["results"]["distortion"];
    let w = |k: &str| {
        let p = &d[k];
        format!("{},{}", f(&p["re"]), f(&p["im"]))
    };
    // s of the images under the map as given
    let direct = json(&trimetric(&["compute", "--z1", &w("w1"), "--z2", &w("w2")]));
    let before = f(&doc["results"]["s"]);
    let ratio = f(&direct["results"]["s"]) / before;
    assert!((ratio - f(&d["report"]["ratio"])).abs() < 1e-12, "{ratio}");
    assert!((f(&d["canonical"]["a"]) - (0.29f64).sqrt()).abs() < 1e-15);
    assert!(ratio <= 1.0 + 0.29f64.sqrt());
}

#[test]
fn compute_usage_errors() {
    let out = trimetric(&["compute", "--domain", "unit-disk", "--z1", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = trimetric(&["compute", "--z1", "1,0", "--z2", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = trimetric(&["compute", "--z1", "0.1", "--z2", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = trimetric(&["compute", "--domain", "polygon", "--z1", "0,0", "--z2", "0.1,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = trimetric(&["compute", "--domain", "half-plane", "--z1", "0,1", "--z2", "0,2", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_parameter() {
    let out = trimetric(&["verify", "--a", "0.5", "--trials", "100000", "--seed", "7", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let max = f(&doc["results"][0]["max_ratio"]);
    assert!(max <= 1.5, "{max}");
    assert_eq!(doc["summary"]["total_trials"], 100_000);
    assert_eq!(doc["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_all_strata() {
    let out = trimetric(&["verify", "--all-a", "--trials", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let strata = doc["results"].as_array().unwrap();
    assert_eq!(strata.len(), 19);
    for s in strata {
        assert!(f(&s["max_ratio"]) <= 1.0 + f(&s["a"]) + 1e-9);
        assert!(f(&s["min_ratio"]) >= 1.0 / (1.0 + f(&s["a"])) - 1e-9);
    }
    let csv = trimetric(&["verify", "--all-a", "--trials", "100", "--seed", "7", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 20);
    assert!(text.starts_with("a,trials,max_ratio"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(trimetric(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(trimetric(&["verify", "--a", "1.0"]).status.code(), Some(2));
    assert_eq!(trimetric(&["verify", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(trimetric(&["verify", "--a", "0.5", "--all-a"]).status.code(), Some(2));
}

#[test]
fn sharpness_examples() {
    let out = trimetric(&["sharpness", "--a", "0.5", "--budget", "100000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(f(&doc["summary"]["best_ratio"]) >= 1.499);
    assert!(f(&doc["summary"]["gap"]) <= 1e-3);
    assert!(f(&doc["summary"]["best_ratio"]) <= 1.5 + 1e-9);

    let doc = json(&trimetric(&["sharpness", "--a", "0.1", "--budget", "100000"]));
    assert!(f(&doc["summary"]["best_ratio"]) >= 1.099);

    assert_eq!(trimetric(&["sharpness", "--a", "0"]).status.code(), Some(2));
    assert_eq!(trimetric(&["sharpness", "--a", "0.5", "--budget", "10"]).status.code(), Some(2));
}

#[test]
fn scan_grid() {
    let out = trimetric(&["scan", "--a", "0.3", "--steps", "360", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phi,cos_phi,tangency,refined_constant,theta,R"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 360);
    let constant = |r: &Vec<String>| r[3].parse::<f64>().unwrap();
    let peak = rows.iter().map(constant).fold(f64::NEG_INFINITY, f64::max);
    assert!((peak - 1.3).abs() < 1e-15);
    assert_eq!(rows[0][0], "0.0");
    assert!((constant(&rows[0]) - 1.3).abs() < 1e-15);
    assert!((rows[0][5].parse::<f64>().unwrap() - 13.0 / 6.0).abs() < 1e-14);
    for r in &rows {
        if r[1].parse::<f64>().unwrap() < 0.3 {
            assert_eq!(r[2], "external");
            assert_eq!(constant(r), 1.0);
            assert_eq!(r[5], "");
        }
    }

    let doc = json(&trimetric(&["scan", "--a", "0.3", "--steps", "12"]));
    assert_eq!(doc["results"].as_array().unwrap().len(), 12);
    assert!(doc["results"][0].get("R").is_some());
    assert_eq!(trimetric(&["scan", "--a", "0"]).status.code(), Some(2));
    assert_eq!(trimetric(&["scan", "--a", "0.3", "--steps", "0"]).status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("trimetric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.json");
    let args = ["scan", "--a", "0.4", "--steps", "30"];
    let stdout = trimetric(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let out = trimetric(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_trimetric"))
        .args(["scan", "--a", "0.3"])
        .env("TRIMETRIC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
