//! End-to-end runs of the `deloc` binary on small jobs.

use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

struct Run {
    code: i32,
    report: Value,
}

fn deloc(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_deloc")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().expect("exit code"), report }
}

fn run_job(command: &str, job: &Value, extra: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, serde_json::to_string(job).unwrap()).unwrap();
    let mut args = vec![command, "--job", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    deloc(&args)
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn delta(element: Value, entry: Value) -> Value {
    json!({ "element": element, "matrix": [[entry]] })
}

#[test]
fn report_envelope_carries_versions_and_config() {
    let job = json!({ "command": "group-info", "parameters": { "group": { "kind": "cyclic", "order": 6 }, "radius": 3 } });
    let r = run_job("group-info", &job, &["--workers", "2"]);
    assert_eq!(r.code, 0);
    for key in ["schema_version", "toolkit_version", "job", "config", "results", "errors", "timing"] {
        assert!(r.report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r.report["schema_version"], 1);
    assert_eq!(r.report["config"]["workers"], 2);
    assert_eq!(r.report["config"]["backend"], "float");
    assert_eq!(r.report["results"]["order"], 6);
    assert_eq!(r.report["results"]["ball_sizes"], json!([1, 3, 5, 6]));
}

#[test]
fn heisenberg_group_info() {
    let job = json!({ "parameters": { "group": { "kind": "heisenberg" }, "radius": 8, "classes": [[1, 0, 0], [0, 0, 1]] } });
    let r = run_job("group-info", &job, &[]);
    assert_eq!(r.code, 0);
    let res = &r.report["results"];
    assert_eq!(res["finite"], false);
    assert_eq!(res["ball_sizes"][1], 5);
    assert_eq!(res["classes"][0]["class_finite"], false);
    assert_eq!(res["classes"][0]["growth"]["verdict"]["verdict"], "polynomial");
    assert_eq!(res["classes"][1]["class_finite"], true);
}

#[test]
fn rho_eta_on_order_two() {
    let job = json!({ "parameters": {
        "group": { "kind": "cyclic", "order": 2 },
        "operator": { "k": 1, "terms": [delta(json!(1), json!(1))] }
    }});
    let r = run_job("theorem43", &job, &[]);
    assert_eq!(r.code, 0);
    let row = &r.report["results"]["classes"][0];
    let tau = complex(&row["tau"]["value"]);
    let half = complex(&row["minus_half_eta"]);
    assert!((tau.0 + 0.5).abs() < 1e-6 && tau.1.abs() < 1e-6, "tau = {tau:?}");
    assert!((half.0 + 0.5).abs() < 1e-12, "-eta/2 = {half:?}");
    assert_eq!(row["passed"], true);
    assert_eq!(row["eta_recognition"]["result"]["status"], "recognized");
}

#[test]
fn missing_radius_on_infinite_group_is_a_validation_error() {
    let job = json!({ "parameters": {
        "group": { "kind": "free-abelian", "rank": 2 },
        "element": { "k": 1, "terms": [delta(json!([1, 0]), json!(1))] },
        "class": { "representative": [1, 0] }
    }});
    let r = run_job("trace", &job, &[]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["errors"][0]["kind"], "validation");
    assert_eq!(r.report["errors"][0]["pointer"], "parameters.class.radius");
}

#[test]
fn malformed_jobs_exit_with_validation_code() {
    let unknown = json!({ "command": "trace", "colour": "red" });
    assert_eq!(run_job("trace", &unknown, &[]).code, 3);
    let mismatch = json!({ "command": "eta", "parameters": {} });
    assert_eq!(run_job("trace", &mismatch, &[]).code, 3);
    let version = json!({ "schema_version": 99 });
    assert_eq!(run_job("trace", &version, &[]).code, 3);
    assert_eq!(deloc(&["trace"]).code, 3);
    assert_eq!(deloc(&["trace", "--backend", "quantum"]).code, 3);
    assert_eq!(deloc(&["--help"]).code, 0);
}

#[test]
fn exact_trace_is_rational() {
    let job = json!({ "backend": "exact", "parameters": {
        "group": { "kind": "symmetric", "degree": 3 },
        "element": { "k": 1, "unit": "1/3", "terms": [
            delta(json!([1, 0, 2]), json!("1/2")),
            delta(json!([0, 2, 1]), json!(["1/3", "-1/5"])),
            delta(json!([1, 2, 0]), json!(2))
        ]},
        "class": { "representative": [2, 1, 0] }
    }});
    let r = run_job("trace", &job, &[]);
    assert_eq!(r.code, 0);
    let t = &r.report["results"]["trace"];
    assert_eq!(t["exact"], true);
    assert_eq!(t["value"], json!(["5/6", "-1/5"]));
}

#[test]
fn cli_backend_flag_overrides_job() {
    let job = json!({ "backend": "exact", "parameters": {
        "group": { "kind": "cyclic", "order": 4 },
        "element": { "k": 1, "terms": [delta(json!(1), json!("1/4"))] },
        "class": { "representative": 1 }
    }});
    let r = run_job("trace", &job, &["--backend", "float"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["config"]["backend"], "float");
    assert_eq!(r.report["results"]["trace"]["exact"], false);
}

#[test]
fn exact_boundary_tau() {
    let third = json!("1/3");
    let job = json!({ "backend": "exact", "parameters": {
        "group": { "kind": "cyclic", "order": 3 },
        "path": { "kind": "boundary", "idempotent": { "k": 1, "terms": [
            delta(json!(0), third.clone()), delta(json!(1), third.clone()), delta(json!(2), third)
        ]}},
        "class": { "representative": 1 }
    }});
    let r = run_job("tau", &job, &[]);
    assert_eq!(r.code, 0);
    let tau = complex(&r.report["results"]["tau"]["value"]);
    assert!((tau.0 + 1.0 / 3.0).abs() < 1e-10 && tau.1.abs() < 1e-10, "tau = {tau:?}");
}

#[test]
fn exact_backend_rejected_where_unsupported() {
    let job = json!({ "backend": "exact", "parameters": { "value": 1.5, "orders": [2] } });
    let r = run_job("recognize", &job, &[]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["errors"][0]["pointer"], "backend");
}

#[test]
fn recognize_root_three() {
    let job = json!({ "parameters": { "value": [0.0, 3f64.sqrt()], "orders": [3] } });
    let r = run_job("recognize", &job, &[]);
    assert_eq!(r.code, 0);
    let res = &r.report["results"];
    assert_eq!(res["result"]["status"], "recognized");
    assert!(res["label"].as_str().unwrap().starts_with("consistent with"));
    let pi = json!({ "parameters": { "value": std::f64::consts::PI, "orders": [2] } });
    assert_eq!(run_job("recognize", &pi, &[]).report["results"]["result"]["status"], "not-recognized");
}

#[test]
fn sphere_rotation_index_vanishes() {
    let point = |sign: i32| {
        json!({ "dimension": 0, "ambient_dimension": 2,
                "normal": [{ "angle": { "pi": "1/2" }, "roots": ["n"] }],
                "integration": [{ "monomial": {}, "value": 1 }], "sign": sign })
    };
    let job = json!({ "parameters": { "order": 4, "components": [point(1), point(-1)] } });
    let r = run_job("lefschetz", &job, &[]);
    assert_eq!(r.code, 0);
    let index = complex(&r.report["results"]["index"]);
    assert!(index.0.abs() < 1e-12 && index.1.abs() < 1e-12);
}

#[test]
fn eta_modes_agree_on_symmetric_group() {
    let job = json!({ "parameters": { "source": { "kind": "operator",
        "group": { "kind": "symmetric", "degree": 3 },
        "operator": { "k": 1, "unit": 0.3, "terms": [
            delta(json!([1, 0, 2]), json!(1)), delta(json!([1, 2, 0]), json!(0.5)), delta(json!([2, 0, 1]), json!(0.5))
        ]},
        "class": { "representative": [1, 2, 0] } } } });
    let r = run_job("eta", &job, &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["agreement"]["within_certified_error"], true);
}

#[test]
fn results_are_deterministic_across_worker_counts() {
    let job = json!({ "parameters": { "criteria": [7, 8] } });
    let one = run_job("suite", &job, &["--workers", "1"]);
    let four = run_job("suite", &job, &["--workers", "4"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.report["results"], four.report["results"]);
}

#[test]
fn suite_subset_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let job_path = dir.path().join("job.json");
    std::fs::write(&job_path, r#"{"parameters": {"criteria": [3, 10]}}"#).unwrap();
    let r = deloc(&["suite", "--job", job_path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(Path::new(&out).exists());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["results"]["passed"], 2);
    assert!(report["timing"]["items"]["criterion 03"].is_number());
}

#[test]
fn unknown_criterion_is_rejected() {
    let job = json!({ "parameters": { "criteria": [11] } });
    let r = run_job("suite", &job, &[]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["errors"][0]["pointer"], "parameters.criteria[0]");
}

#[test]
fn example_jobs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let job: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let command = job["command"].as_str().expect("example jobs name their command");
        let name = path.file_name().unwrap().to_str().unwrap();
        let want = if name.starts_with("invalid_") { 3 } else { 0 };
        let r = deloc(&[command, "--job", path.to_str().unwrap()]);
        assert_eq!(r.code, want, "{name}: {}", r.report["errors"]);
        seen += 1;
    }
    assert!(seen >= 8);
}
