use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorentz-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn classify_bp_of_constant_weight() {
    let o = run(&["classify", "--cond", "bp", "--w", "power:a=0", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["holds"], Value::Bool(true));
    assert_eq!(v["condition"], "bp-iii");
    assert_eq!(v["params"]["p"], 2.0);
}

#[test]
fn norm_of_indicator() {
    let o = run(&["norm", "--f", "step:0,1;1,0", "--w", "chi:b=1", "--p", "1", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["norm", "--f", "step:0,1;1,0", "--w", "chi:b=1", "--p", "1", "--q", "inf", "--all"]);
    let v = json(&o);
    for k in ["distribution", "rearranged", "layered"] {
        assert!((v[k].as_f64().unwrap() - 1.0).abs() < 1e-12, "{k}");
    }
}

#[test]
fn usage_errors_exit_2_with_json_on_stderr() {
    for args in [
        vec!["frobnicate"],
        vec!["norm", "--f", "nope", "--w", "one", "--p", "1", "--q", "1"],
        vec!["norm", "--f", "step:0,1;1,0", "--w", "one", "--p", "-1", "--q", "1"],
        vec!["classify", "--cond", "bp", "--p", "2"],
        vec!["verify", "--suite", "no-such-suite"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        let e: Value = serde_json::from_slice(&o.stderr).expect("JSON error");
        assert_eq!(e["error"], "usage");
    }
}

#[test]
fn verify_json_is_reproducible() {
    let args = ["verify", "--suite", "discrete-duality", "--seed", "11", "--emit", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], "lorentz-lab/1");
    assert_eq!(v["suite"], "discrete-duality");
    let case = &v["cases"][0];
    for k in ["id", "theorem", "verdict", "constant", "witness", "tolerance", "runtime_ms"] {
        assert!(case.get(k).is_some(), "missing {k}");
    }
    assert_eq!(case["runtime_ms"], Value::Null);
    assert_eq!(case["verdict"], "pass");
}

#[test]
fn verify_timings_are_opt_in() {
    let o = run(&["verify", "--suite", "normability", "--emit", "json", "--timings"]);
    assert!(json(&o)["cases"][0]["runtime_ms"].is_u64());
}

#[test]
fn verify_table_marks_expected_failure() {
    let o = run(&["verify", "--suite", "counterexamples"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("XFAIL"), "{s}");
    assert!(s.ends_with("1 passed, 0 failed\n"));
}

#[test]
fn reduce_pass_and_fail_exit_codes() {
    let o = run(&["reduce", "--w0", "one", "--w1", "power:a=0.5", "--p0", "1", "--p1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "PASS");
    // outside the equality regime: reported, not failed
    let o = run(&["reduce", "--preset", "identity", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "outside");
}

#[test]
fn csv_curves() {
    let o = run(&["rearrange", "--f", "step:0,1;1,3;2,0"]);
    assert_eq!(stdout(&o), "t,value,bound\n0,3,3\n1,1,3\n");
    let o = run(&["kfun", "--f", "step:0,2;1,1;2,0", "--p", "1", "--ts", "0.5,1,3"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("t,k_explicit,k_oracle,ratio"));
    // K(f, t; L^1, L^inf) = ∫_0^t f*
    assert_eq!(lines.next(), Some("0.5,1,1,1"));
    let o = run(&["maximal", "--f", "step:0,1;1,0", "--ts", "2", "--search-budget", "0"]);
    let s = stdout(&o);
    let row: Vec<f64> = s.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    // (Mχ_[0,1))*(t) = 2/(t+1), located by bisection
    assert!(s.starts_with("t,value,bound\n"));
    assert!((row[1] - 2.0 / 3.0).abs() < 1e-12 && row[2] == 0.5);
}

#[test]
fn maximal_json_search_depends_only_on_seed() {
    let args = ["maximal", "--f", "step:0,1;1,0", "--u", "expabs", "--w", "chi:b=1", "--search-budget", "40", "--emit", "json", "--seed", "3"];
    let a = run(&args);
    assert_eq!(a.stdout, run(&args).stdout);
    let v = json(&a);
    assert_eq!(v["search"]["condition"], "cube-family");
}

#[test]
fn duality_and_normability() {
    let o = run(&["dual", "--kind", "discrete", "--seq", "seq:1", "--omega", "one", "--p", "2"]);
    assert!((json(&o)["associate"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let o = run(&["dual", "--kind", "sawyer", "--w0", "chi:b=1", "--w1", "chi:b=1", "--p", "2"]);
    assert_eq!(json(&o)["sup"]["value"], 1.0);
    let o = run(&["normability", "--space", "d-weak", "--omega", "one", "--p", "0.5"]);
    assert_eq!(json(&o)["is_normable"], false);
    let o = run(&["classify", "--cond", "lpq", "--p", "1", "--q", "2", "--s", "inf"]);
    assert!(json(&o)["class"].as_str().unwrap().starts_with("impossible"));
}
