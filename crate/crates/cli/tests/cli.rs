use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polyginibre"));
    c.env_remove("POLYGINIBRE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_csv(p: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json_keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

#[test]
fn blowup_interior_profile_and_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("profile.csv");
    let o = run(&[
        "blowup", "--m", "400", "--n", "400", "--q", "2", "--center", "0", "--extent", "4", "--res", "200", "-o",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["xi_re", "xi_im", "density", "limit_density", "gap"]);
    assert_eq!(rows.len(), 200 * 200);
    assert!(rows.iter().all(|r| r.len() == 5 && (r[4] - (r[2] - r[3]).abs()).abs() <= 1e-15));
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("profile.json")).unwrap()).unwrap();
    assert!(summary["l1_gap"].as_f64().unwrap() <= 0.05);
    assert_eq!(summary["center_kind"], "interior");
}

#[test]
fn blowup_boundary_center_is_classified() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("edge.csv");
    let o = run(&[
        "blowup", "--m", "400", "--n", "400", "--q", "2", "--center", "1", "--extent", "2", "--res", "21", "-o",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 0);
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("edge.json")).unwrap()).unwrap();
    assert_eq!(summary["center_kind"], "boundary");
    assert!(summary["sup_gap"].as_f64().unwrap() <= 0.2);
}

#[test]
fn missing_q_is_a_usage_error() {
    let o = run(&["blowup", "--m", "4", "--n", "4", "--center", "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn invalid_params_and_grid_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let p = path_str(&out);
    assert_eq!(code(&run(&["sample", "--m", "4", "--n", "2", "--q", "3", "-o", p])), 2);
    assert_eq!(code(&run(&["sample", "--m", "-1", "--n", "2", "--q", "1", "-o", p])), 2);
    assert_eq!(code(&run(&["kernel", "--m", "4", "--n", "4", "--q", "1", "--res", "5000", "-o", p])), 2);
    assert_eq!(code(&run(&["kernel", "--m", "4", "--n", "4", "--q", "1", "--extent", "0", "-o", p])), 2);
    assert_eq!(code(&run(&["exterior", "--m", "4", "--n", "4", "--q", "1", "--z", "0.5", "-o", p])), 2);
}

#[test]
fn unwritable_path_is_a_runtime_failure() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("missing").join("x.csv");
    let o = run(&["sample", "--m", "4", "--n", "4", "--q", "1", "-o", path_str(&out)]);
    assert_eq!(code(&o), 3);
}

#[test]
fn sample_is_deterministic_and_has_nq_rows() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["sample", "--m", "61", "--n", "61", "--q", "3", "--seed", "1", "-o", path_str(p)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let (header, rows) = read_csv(&a);
    assert_eq!(header, ["re", "im"]);
    assert_eq!(rows.len(), 183);

    let c = dir.path().join("c.csv");
    assert_eq!(code(&run(&["sample", "--m", "30", "--n", "30", "--q", "2", "--seed", "5", "-o", path_str(&c)])), 0);
    assert_eq!(read_csv(&c).1.len(), 60);
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("k{threads}.csv"));
        let o = bin()
            .env("POLYGINIBRE_THREADS", threads)
            .args(["kernel", "--m", "20", "--n", "20", "--q", "2", "--w=0.1-0.2i", "--extent", "1", "--res", "31", "-o"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let o = bin().env("POLYGINIBRE_THREADS", "many").args(["verify", "--suite", "specfun"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_specfun_reports_laws() {
    let o = run(&["verify", "--suite", "specfun", "--fast"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let laws = report.as_array().unwrap();
    assert!(laws.len() >= 7);
    assert!(laws.iter().all(|l| l["passed"] == true));
}

#[test]
fn malformed_suite_is_a_usage_error() {
    assert_eq!(code(&run(&["verify", "--suite", "everything"])), 2);
}

#[test]
fn kernel_csv_matches_closed_form_near_origin() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.csv");
    let o = run(&["kernel", "--m", "100", "--n", "100", "--q", "3", "--extent", "0.7", "--res", "11", "-o", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().all(|r| r[6] <= 1e-4));
}

#[test]
fn output_schemas_are_stable() {
    let dir = TempDir::new().unwrap();
    let d = |name: &str| dir.path().join(name);

    let k = d("k.csv");
    assert_eq!(code(&run(&["kernel", "--m", "4", "--n", "4", "--q", "2", "--res", "2", "-o", path_str(&k)])), 0);
    assert_eq!(read_csv(&k).0, ["z_re", "z_im", "kernel_re", "kernel_im", "limit_re", "limit_im", "gap"]);
    let kj = d("k.json");
    let args = ["kernel", "--m", "4", "--n", "4", "--q", "2", "--res", "2", "--format", "json", "-o", path_str(&kj)];
    assert_eq!(code(&run(&args)), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&kj).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(json_keys(&v[0]), ["gap", "kernel_im", "kernel_re", "limit_im", "limit_re", "z_im", "z_re"]);

    let b = d("b.csv");
    let args = ["blowup", "--m", "50", "--n", "50", "--q", "1", "--center", "0.2i", "--res", "3", "-o", path_str(&b)];
    assert_eq!(code(&run(&args)), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(d("b.json")).unwrap()).unwrap();
    assert_eq!(
        json_keys(&v),
        ["center_im", "center_kind", "center_re", "extent", "l1_gap", "m", "n", "q", "res", "sup_gap"]
    );

    let s = d("s.csv");
    assert_eq!(code(&run(&["sample", "--m", "3", "--n", "3", "--q", "1", "--seed", "9", "-o", path_str(&s)])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(d("s.json")).unwrap()).unwrap();
    assert_eq!(json_keys(&v), ["m", "n", "q", "seed"]);
    assert_eq!(v["seed"], 9);

    let e = d("e.json");
    let args = ["exterior", "--m", "50", "--n", "50", "--q", "1", "--z=-1.5", "--lmax", "2", "-o", path_str(&e)];
    assert_eq!(code(&run(&args)), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&e).unwrap()).unwrap();
    assert_eq!(json_keys(&v), ["m", "mass_outside", "moments", "n", "q", "rho", "z_im", "z_re"]);
    assert_eq!(v["moments"].as_array().unwrap().len(), 3);
    assert_eq!(
        json_keys(&v["moments"][0]),
        ["gap", "harmonic_im", "harmonic_re", "l", "moment_im", "moment_re", "target_im", "target_re"]
    );
    let ec = d("e.csv");
    let args = ["exterior", "--m", "50", "--n", "50", "--q", "1", "--z", "2", "--format", "csv", "-o", path_str(&ec)];
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(
        read_csv(&ec).0,
        ["l", "moment_re", "moment_im", "harmonic_re", "harmonic_im", "target_re", "target_im", "gap"]
    );

    let r = d("report.json");
    assert_eq!(code(&run(&["verify", "--suite", "transforms", "--fast", "-o", path_str(&r)])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&r).unwrap()).unwrap();
    for law in v.as_array().unwrap() {
        assert_eq!(json_keys(law), ["grid", "law", "observed_error", "passed", "rate_estimate", "tolerance"]);
    }
}
