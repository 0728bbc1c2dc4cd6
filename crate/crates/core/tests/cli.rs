use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coneq").chain(args.iter().copied());
    let code = coneq::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out)
        .unwrap_or_else(|e| panic!("{e}: stdout {out:?}, stderr {err:?}"));
    (code, v)
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn verify_lemma1_example() {
    let (code, v) = run_json(&[
        "verify", "--sig", "2,2", "--suite", "lemma1", "--trials", "100", "--seed", "7",
    ]);
    assert_eq!(code, 0);
    let r = &v["reports"][0];
    assert_eq!(r["suite"], "lemma1");
    assert_eq!(r["passed"], 100);
    assert_eq!(r["failed"], 0);
    assert!(r["worst_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn metric_epsilon_example() {
    let (code, v) = run_json(&[
        "metric", "--sig", "1,1", "--frame", "epsilon", "--x", "1,0,1,0",
    ]);
    assert_eq!(code, 0);
    let e = &v["entries"];
    let want = [[1.0, 0.0], [0.0, -1.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((e[i][j].as_f64().unwrap() - want[i][j]).abs() <= 1e-12);
        }
    }
    assert_eq!(v["signature"], serde_json::json!([1, 1, 0]));
}

#[test]
fn chart_inverse_of_centre_is_in_aperp() {
    let (code, v) = run_json(&["chart", "inverse", "--sig", "2,2", "--b", "1,0,0,0,0,0,1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({ "result": "InAperp" }));
}

#[test]
fn chart_forward_then_inverse() {
    let (code, v) = run_json(&[
        "chart",
        "forward",
        "--sig",
        "2,3",
        "--r",
        "-1.25",
        "--y",
        "0.5,-1,2,0,0,3",
    ]);
    assert_eq!(code, 0);
    let b: Vec<String> = v["class"]["vector"]["vector"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|z| {
            z.as_array()
                .unwrap()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
        })
        .collect();
    let (code, inv) = run_json(&["chart", "inverse", "--sig", "2,3", "--b", &b.join(",")]);
    assert_eq!(code, 0);
    assert_eq!(inv["result"], "Point");
    assert!((inv["r"].as_f64().unwrap() + 1.25).abs() < 1e-9);
    let y = inv["y"].as_array().unwrap();
    let want = [(0.5, -1.0), (2.0, 0.0), (0.0, 3.0)];
    for (z, (re, im)) in y.iter().zip(want) {
        assert!((z[0].as_f64().unwrap() - re).abs() < 1e-9);
        assert!((z[1].as_f64().unwrap() - im).abs() < 1e-9);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["metric", "--bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "--sig", "0,2"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "no_such_suite"]).0, 2);
    assert_eq!(run(&["verify", "--sig", "2,2", "--suite", "torus"]).0, 2);
    assert_eq!(run(&["metric", "--format", "csv"]).0, 2);
    // not isotropic
    assert_eq!(run(&["metric", "--sig", "1,1", "--x", "1,0,0,0"]).0, 2);
    // wrong length
    assert_eq!(run(&["metric", "--sig", "1,1", "--x", "1,0,1"]).0, 2);
    assert_eq!(run(&["torus", "--sig", "2,2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn failed_verification_exits_1_with_counterexample() {
    let (code, out, err) = run(&[
        "verify", "--sig", "2,2", "--suite", "lemma1", "--trials", "5", "--tol", "0",
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], false);
    assert!(v["reports"][0]["counterexample"]["detail"]["x"].is_object());
    assert!(err.contains("FAIL") && err.contains("counterexample"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify", "--sig", "1,2", "--suite", "all", "--trials", "4", "--seed", "11",
    ];
    let (c1, mut a) = run_json(&args);
    let (c2, mut b) = run_json(&args);
    assert_eq!((c1, c2), (0, 0));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a["reports"].as_array().unwrap().len(), 24);

    let s = [
        "sample", "--sig", "3,2", "--trials", "3", "--seed", "5", "--kind", "unitary",
    ];
    assert_eq!(run(&s).1, run(&s).1);
}

#[test]
fn verify_all_covers_every_applicable_suite() {
    let (code, v) = run_json(&["verify", "--sig", "1,1", "--trials", "3"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    let applicable: Vec<&str> = coneq::suites::suites()
        .iter()
        .filter(|s| s.applies_to(coneq::pseudoherm::Signature::new(1, 1).unwrap()))
        .map(|s| s.name)
        .collect();
    assert_eq!(names, applicable);
    assert!(names.contains(&"torus"));
}

#[test]
fn sample_emits_isotropic_points() {
    let (code, v) = run_json(&["sample", "--sig", "2,3", "--trials", "10", "--seed", "1"]);
    assert_eq!(code, 0);
    for s in v["samples"].as_array().unwrap() {
        let c: Vec<(f64, f64)> = s["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
            .collect();
        let f: f64 = c
            .iter()
            .enumerate()
            .map(|(j, (a, b))| (a * a + b * b) * if j < 2 { 1.0 } else { -1.0 })
            .sum();
        assert!(f.abs() < 1e-10);
    }
}

#[test]
fn cometric_and_aperp_commands() {
    let (code, v) = run_json(&["cometric", "--sig", "1,1", "--x", "0,1,1,0"]);
    assert_eq!(code, 0);
    assert!(v["entries"][0][0].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(v["signature"], serde_json::json!([0, 0, 1]));

    let (code, v) = run_json(&["cometric", "--sig", "2,3", "--seed", "3", "--route", "dual"]);
    assert_eq!(code, 0);
    let sig = v["signature"].as_array().unwrap();
    assert_eq!(sig[0].as_u64().unwrap() + sig[1].as_u64().unwrap(), 6);

    let (code, v) = run_json(&[
        "aperp",
        "classify",
        "--sig",
        "2,2",
        "--b",
        "0,2,0,0,0,0,0,2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "Apex");
    let (code, v) = run_json(&[
        "aperp",
        "classify",
        "--sig",
        "2,2",
        "--b",
        "1,0,1,0,1,0,1,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "Generic");
    // not orthogonal to the centre
    assert_eq!(
        run(&[
            "aperp",
            "classify",
            "--sig",
            "2,2",
            "--b",
            "1,0,0,0,1,0,0,0"
        ])
        .0,
        2
    );

    let (code, v) = run_json(&["aperp", "dim", "--sig", "3,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 7);
}

#[test]
fn torus_csv_curves() {
    let (code, out, _) = run(&[
        "torus", "--sig", "1,1", "--trials", "2", "--steps", "8", "--seed", "4",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("curve,point,step,phi1,phi2"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 2 * 8);
    // U(1) orbits move both angles together; the fibre is a null curve
    let tau = std::f64::consts::TAU;
    for r in rows.iter().filter(|r| r[0] == "fiber") {
        let twin = rows
            .iter()
            .find(|s| s[0] == "null_plus" && s[1] == r[1] && s[2] == r[2])
            .unwrap();
        for k in [3, 4] {
            let a: f64 = r[k].parse().unwrap();
            let b: f64 = twin[k].parse().unwrap();
            let d = (a - b).rem_euclid(tau);
            assert!(d.min(tau - d) < 1e-9);
        }
    }
    let (code, v) = run_json(&[
        "torus", "--sig", "1,1", "--trials", "1", "--steps", "4", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn oracle_command_passes() {
    let (code, v) = run_json(&["oracle", "--sig", "2,2", "--trials", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("coneq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("metric.json");
    let (code, out, _) = run(&[
        "metric",
        "--sig",
        "1,2",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["signature"], serde_json::json!([1, 3, 0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_uses_seed_environment_fallback() {
    let bin = env!("CARGO_BIN_EXE_coneq");
    let with_flag = Command::new(bin)
        .args(["sample", "--sig", "1,2", "--trials", "2", "--seed", "99"])
        .output()
        .unwrap();
    let with_env = Command::new(bin)
        .args(["sample", "--sig", "1,2", "--trials", "2"])
        .env("CONEQ_SEED", "99")
        .output()
        .unwrap();
    let default = Command::new(bin)
        .args(["sample", "--sig", "1,2", "--trials", "2"])
        .env_remove("CONEQ_SEED")
        .output()
        .unwrap();
    assert!(with_flag.status.success() && with_env.status.success());
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_ne!(with_flag.stdout, default.stdout);

    let bad = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
