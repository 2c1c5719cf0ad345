use std::fs;
use std::process::{Command, Output};

fn paraflux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paraflux"))
        .args(args)
        .env_remove("PARAFLUX_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pure_wave_norm_is_sixteen_in_both_families() {
    let o = paraflux(&["norm", "--wave", "4", "--s", "2", "--p", "2", "--q", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let norms = v["norms"].as_array().unwrap();
    assert_eq!(norms.len(), 2);
    for row in norms {
        assert!((row["norm"].as_f64().unwrap() - 16.0).abs() < 1e-12, "{row}");
    }

    let text = paraflux(&["norm", "--wave", "4", "--s", "2", "--p", "2", "--q", "2"]);
    let values: Vec<f64> = stdout(&text)
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    let json_values: Vec<f64> = norms.iter().map(|r| r["norm"].as_f64().unwrap()).collect();
    assert_eq!(values, json_values);
}

#[test]
fn hardy_only_stays_below_the_bound() {
    let o = paraflux(&["lemmas", "--only", "hardy"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,params,lhs,rhs_core,ratio,bound,verdict"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[0].starts_with("hardy"), "{line}");
        let ratio: f64 = cols[4].parse().unwrap();
        let bound: f64 = cols[5].parse().unwrap();
        assert!(ratio <= bound, "{line}");
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn failing_hypotheses_exit_two_and_name_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.json");
    fs::write(
        &path,
        r#"{"multiplications":[{"mode":"positive","factors":[{"s":0.5,"p":2},{"s":1,"p":2}],"q":2}]}"#,
    )
    .unwrap();
    let o = paraflux(&["audit", "--manifest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s1 < n/p1"));
}

#[test]
fn missing_input_exits_three() {
    let o = paraflux(&["norm", "--in", "/definitely/not/here.fld", "--s", "0", "--p", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_paraflux"))
        .args(["lemmas", "--only", "hardy"])
        .env("PARAFLUX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lemma_runs_are_byte_identical_across_thread_counts() {
    let args = ["lemmas", "--only", "nikolskii,qj-lp", "--size", "128", "--planar-size", "64"];
    let a = paraflux(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_paraflux"))
        .args(args)
        .env("PARAFLUX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_then_decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"[{"kind":"random-band","s":0.5,"p":2,"seed":3,"grid":{"dim":1,"size":128}},
            {"kind":"gaussian-bump","center":[3.0],"width":0.4,"grid":{"dim":1,"size":128}}]"#,
    )
    .unwrap();
    let out = dir.path().join("fields");
    let g = paraflux(&["gen", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    let f0 = out.join("field_000.fld");
    let f1 = out.join("field_001.fld");
    let dec = dir.path().join("dec");
    let d = paraflux(&[
        "decompose",
        "--in",
        f0.to_str().unwrap(),
        "--in",
        f1.to_str().unwrap(),
        "--dump-bands",
        "--out",
        dec.to_str().unwrap(),
    ]);
    assert_eq!(d.status.code(), Some(0), "{}", String::from_utf8_lossy(&d.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dec.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["gap"], 3);
    assert!(manifest["reconstruction_error"].as_f64().unwrap() < 1e-10);
    assert!(dec.join("pi1_k2.fld").exists());
    assert!(dec.join("run.json").exists());

    let too_small = paraflux(&["decompose", "--in", f0.to_str().unwrap(), "--m", "3", "--gap", "2", "--out", dec.to_str().unwrap()]);
    assert_eq!(too_small.status.code(), Some(2));
}
