use std::process::{Command, Output};

use serde_json::Value;

fn selfless(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfless"))
        .args(args)
        .env_remove("SELFLESS_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = selfless(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_of(args: &[&str]) -> (i32, Value) {
    let out = selfless(args);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| {
        panic!("stderr is not json: {}", String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), err)
}

fn int(v: &Value) -> String {
    assert_eq!(v["den"], "1", "{v}");
    v["num"].as_str().unwrap().to_string()
}

#[test]
fn cascade_constants() {
    let trivial = json_ok(&["tree", "cascade", "--lambda", "1", "--glen", "1", "--provider", "trivial"]);
    assert_eq!(int(&trivial["outputs"]["C"]), "3");
    let default = json_ok(&["tree", "cascade", "--lambda", "1", "--glen", "1", "--provider", "default"]);
    let o = &default["outputs"];
    let got: Vec<String> = ["C", "B", "R", "Lambda", "D", "threshold"]
        .iter()
        .map(|k| int(&o[*k]))
        .collect();
    assert_eq!(got, ["5", "23", "36", "217", "9331", "9331"]);
}

#[test]
fn provider_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("linear.txt");
    std::fs::write(&path, "# linear constants\nQ2 = 0,1,0\nQ3 = 0,1,0\n").unwrap();
    let r = json_ok(&[
        "tree", "cascade", "--lambda", "1", "--glen", "1", "--provider", path.to_str().unwrap(),
    ]);
    assert_eq!(int(&r["outputs"]["C"]), "3");
    let (code, err) = error_of(&["tree", "cascade", "--lambda", "1", "--glen", "1", "--provider", "/nonexistent/p"]);
    assert_eq!(code, 1);
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn injectivity_example() {
    let r = json_ok(&[
        "selfless", "--group", "x|y|a", "--g", "x", "--n", "3", "--check-injectivity", "--radius", "3",
    ]);
    assert_eq!(r["outputs"]["injective"], true);
    assert_eq!(r["outputs"]["ball_size"], 187);
    assert_eq!(r["inputs"]["map"]["retraction"]["image_of_a"], "y^7.x.y^-7");
    let collide = json_ok(&["selfless", "--map", "a=x", "--radius", "2"]);
    assert_eq!(collide["outputs"]["injective"], false);
}

#[test]
fn norm_example_radicands() {
    let r = json_ok(&[
        "norm", "--group", "a|b", "--element", "1*a + 1*a^-1 + 1*b + 1*b^-1", "--m-max", "4",
    ]);
    let rad: Vec<String> = r["outputs"]["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| int(&s["radicand"]))
        .collect();
    assert_eq!(rad, ["28", "2092", "20275660"]);
    assert_eq!(r["truncated"], false);
    assert_eq!(r["outputs"]["lower_monotone"], true);
}

#[test]
fn selfless_actions() {
    let g = json_ok(&["selfless", "growth", "--g", "x", "--radius-max", "4"]);
    let f: Vec<u64> = g["outputs"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["f_measured"].as_u64().unwrap())
        .collect();
    assert_eq!(f, [7, 12, 31, 40]);
    let t = json_ok(&["selfless", "transfer", "--g", "x", "--element", "1/3*e + 1/3*x + 1/3*a", "--ms", "1,2"]);
    let steps = t["outputs"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert!(steps.iter().all(|s| s["chain_equal"] == true));
    assert_eq!(steps[0]["poly_squared"], "819");
    let p = json_ok(&["selfless", "product", "--g", "x", "--n", "2", "--s", "x,y", "--p", "3"]);
    assert_eq!(p["outputs"]["nontrivial"], true);
    let f = json_ok(&["selfless", "fibers", "--map", "a=e", "--radius", "1"]);
    assert_eq!(f["outputs"]["max_fiber"], 3);
}

#[test]
fn tree_actions() {
    let l = json_ok(&["tree", "length", "--g", "b.a.b^-1"]);
    assert_eq!(l["outputs"]["translation_length"], 1);
    let p = json_ok(&["tree", "project", "--g", "a.b", "--h", "a"]);
    assert_eq!(p["outputs"]["projection"]["diameter"], 0);
    assert_eq!(p["outputs"]["within_provider_bound"], true);
    let e = json_ok(&["tree", "project", "--g", "a.b", "--h", "a.b.a.b"]);
    assert_eq!(e["outputs"]["projection"]["bounded"], false);
    let path = json_ok(&["tree", "path", "--g", "a.b", "--h", "b^-1.a", "--n", "2"]);
    assert_eq!(path["outputs"]["nontrivial"], true);
    let s = json_ok(&["tree", "search", "--g", "a", "--h-radius", "1", "--m", "2"]);
    assert_eq!(s["outputs"]["n_emp"], 1);
    let st = json_ok(&["tree", "stable", "--g", "b.a^2.b^-1", "--samples", "1,3"]);
    assert_eq!(st["outputs"]["exact"], 2);
}

#[test]
fn exit_codes() {
    let (code, err) = error_of(&["norm", "--element", "1/2*a + 3*q"]);
    assert_eq!(code, 4);
    assert_eq!(err["error"]["kind"], "parse");
    assert_eq!(err["error"]["position"], 10);

    let (code, err) = error_of(&["selfless", "--g", "a", "--a", "a", "--n", "2"]);
    assert_eq!(code, 2);
    assert_eq!(err["error"]["kind"], "hypothesis");

    let (code, err) = error_of(&["ball", "--radius", "6", "--list", "--budget", "100"]);
    assert_eq!(code, 3);
    assert_eq!(err["error"]["kind"], "budget_exceeded");

    let (code, _) = error_of(&["norm", "--element", "a", "--m-max", "3"]);
    assert_eq!(code, 2);

    let (code, _) = error_of(&["tree", "length", "--g", "e", "--group", "a|a"]);
    assert_eq!(code, 2);
}

#[test]
fn truncated_norm_keeps_partial_report() {
    let out = selfless(&[
        "norm", "--element", "a + a^-1 + b + b^-1", "--m-max", "8", "--budget", "20000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["truncated"], true);
    assert!(!r["outputs"]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_deterministic_across_threads() {
    let base = ["norm", "--element", "1/2*e + a - 1/3*b.a^-1", "--m-max", "4"];
    let run = |t: &str| {
        let mut args = base.to_vec();
        args.extend(["--threads", t]);
        selfless(&args).stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    for t in ["2", "4", "8"] {
        assert_eq!(run(t), one);
    }
    let timed = json_ok(&["norm", "--element", "a", "--timing"]);
    let plain = json_ok(&["norm", "--element", "a"]);
    assert_eq!(timed["body_sha256"], plain["body_sha256"]);
    assert!(timed["diagnostics"]["elapsed_ms"].is_string());
}

#[test]
fn csv_output() {
    let out = selfless(&["ball", "--radius", "1", "--list", "--format", "csv"]);
    assert!(out.status.success());
    let mut rd = csv::Reader::from_reader(&out.stdout[..]);
    let words: Vec<String> = rd.records().map(|r| r.unwrap()[1].to_string()).collect();
    assert_eq!(words, ["e", "a", "a^-1", "b", "b^-1"]);
    let kv = selfless(&["tree", "length", "--g", "a.b", "--format", "csv"]);
    let text = String::from_utf8(kv.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("outputs.translation_length,2"));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_selfless"))
            .args(["norm", "--element", "a + b", "--m-max", "4", "--timing"])
            .env("SELFLESS_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first: Value = serde_json::from_slice(&run().stdout).unwrap();
    let second: Value = serde_json::from_slice(&run().stdout).unwrap();
    assert_eq!(first["diagnostics"]["cache"]["stores"], 2);
    assert_eq!(second["diagnostics"]["cache"]["hits"], 2);
    assert_eq!(first["body_sha256"], second["body_sha256"]);
}
