//! End-to-end tests of the `pqcalc` binary: argument parsing, the JSON
//! response contract, exit codes, and environment handling.

use std::process::{Command, Output};

use serde_json::Value;

fn pqcalc() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pqcalc"));
    // Keep tests independent of the ambient environment.
    cmd.env_remove("PQ_MAX_TERMS");
    cmd
}

fn run(args: &[&str]) -> Output {
    pqcalc().args(args).output().expect("binary should run")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|err| {
        panic!(
            "stdout should hold one JSON object, got {:?} ({err})",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should not be signalled")
}

#[test]
fn number_matches_contract_example() {
    let out = run(&["number", "--x", "3", "--base", "2,1"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"schema\":\"pq/1\",\"status\":\"ok\",\"value\":{\"re\":\"7\",\"im\":\"0\"}}\n"
    );
}

#[test]
fn scalar_forms_agree() {
    let comma = run(&["number", "--x", "0.5,-1", "--base", "2,1"]);
    let suffix = run(&["number", "--x", "0.5-1i", "--base", "2,1"]);
    let capital = run(&["number", "--x", "0.5-1I", "--base", "2,1"]);
    assert_eq!(exit_code(&comma), 0);
    assert_eq!(comma.stdout, suffix.stdout);
    assert_eq!(comma.stdout, capital.stdout);

    // A bare `i` carries unit coefficient, a bare number is purely real.
    let unit = json_of(&run(&["number", "--x", "2+i", "--base", "1,1"]));
    assert_eq!(unit["value"]["re"], "2");
    assert_eq!(unit["value"]["im"], "1");
    let real = json_of(&run(&["number", "--x", "3", "--base", "1,1"]));
    assert_eq!(real["value"]["re"], "3");
    assert_eq!(real["value"]["im"], "0");
}

#[test]
fn value_strings_round_trip_to_the_same_bits() {
    // Over the degenerate base doublet (1,1) the twin-basic number of x is
    // x itself, so the response echoes the parsed input and the printed
    // string must come back to the identical double.
    for x in [
        0.1f64,
        -0.1,
        1.0 / 3.0,
        6.02214076e23,
        -2.2250738585072014e-308,
        5e-324,
        123456789.123456789,
    ] {
        let arg = format!("{x}");
        let out = json_of(&run(&["number", "--x", &arg, "--base", "1,1"]));
        let re: f64 = out["value"]["re"]
            .as_str()
            .expect("re is a string")
            .parse()
            .expect("re parses as f64");
        assert_eq!(re.to_bits(), x.to_bits(), "round trip failed for {x:e}");
    }
}

#[test]
fn factorial_of_mersenne_base_is_exact() {
    let out = json_of(&run(&["factorial", "--n", "5", "--base", "2,1"]));
    assert_eq!(out["value"]["re"], "9765");
    assert_eq!(out["value"]["im"], "0");
}

#[test]
fn series_reports_truncation_diagnostics() {
    let out = run(&[
        "series",
        "--num-pairs",
        "1,0.3",
        "--base",
        "0.5,0.25",
        "--z",
        "0.4",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["diagnostics"]["termination"], "tolerance_reached");
    assert!(v["diagnostics"]["terms_used"].as_u64().unwrap() > 10);
    let err: f64 = v["diagnostics"]["error_estimate"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(err > 0.0 && err < 1e-10);
}

#[test]
fn naturally_terminating_series_is_exact() {
    let out = json_of(&run(&[
        "series",
        "--num-pairs",
        "1,4",
        "--base",
        "1,0.5",
        "--z",
        "1",
    ]));
    assert_eq!(out["diagnostics"]["termination"], "natural");
    assert_eq!(out["diagnostics"]["terms_used"], 3);
    assert_eq!(out["diagnostics"]["error_estimate"], "0");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["number", "--x", "abc", "--base", "2,1"] as &[&str],
        &["number", "--x", "3"],
        &["number", "--x", "3", "--base", "2,1,5"],
        &["no-such-command"],
        &["series", "--base", "2,1", "--z", "1+2j"],
    ] {
        let out = run(args);
        assert_eq!(exit_code(&out), 1, "args {args:?}");
        let v = json_of(&out);
        assert_eq!(v["status"], "usage_error", "args {args:?}");
        assert!(v["message"].is_string());
        assert!(v.get("value").is_none());
    }
}

#[test]
fn evaluation_errors_exit_two_with_matching_status() {
    let cases = [
        (
            &["series", "--base", "1,1.1", "--z", "0.5"] as &[&str],
            "convergence_error",
        ),
        (
            &["series", "--base", "0.5,0.4", "--z", "1.5"],
            "divergence_error",
        ),
        (
            &[
                "series",
                "--den-pairs",
                "0.25,1",
                "--base",
                "1,0.5",
                "--z",
                "0.1",
            ],
            "pole_error",
        ),
        (
            &["oscillator", "--p", "0", "--q", "0.5", "--dim", "4"],
            "domain_error",
        ),
    ];
    for (args, status) in cases {
        let out = run(args);
        assert_eq!(exit_code(&out), 2, "args {args:?}");
        let v = json_of(&out);
        assert_eq!(v["status"], status, "args {args:?}");
        assert!(v["message"].is_string());
    }
}

#[test]
fn term_cap_env_var_applies_and_flag_wins() {
    let series_args = [
        "series",
        "--num-pairs",
        "1,0.3",
        "--base",
        "0.5,0.25",
        "--z",
        "0.4",
    ];
    let capped = pqcalc()
        .args(series_args)
        .env("PQ_MAX_TERMS", "10")
        .output()
        .expect("binary should run");
    let v = json_of(&capped);
    assert_eq!(v["diagnostics"]["terms_used"], 10);
    assert_eq!(v["diagnostics"]["termination"], "max_terms_reached");

    let flagged = pqcalc()
        .args(series_args)
        .args(["--max-terms", "500"])
        .env("PQ_MAX_TERMS", "10")
        .output()
        .expect("binary should run");
    let v = json_of(&flagged);
    assert_eq!(v["diagnostics"]["termination"], "tolerance_reached");

    let invalid = pqcalc()
        .args(series_args)
        .env("PQ_MAX_TERMS", "three")
        .output()
        .expect("binary should run");
    assert_eq!(exit_code(&invalid), 1);
    assert_eq!(json_of(&invalid)["status"], "usage_error");
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(exit_code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("pqcalc"));
    let version = run(&["--version"]);
    assert_eq!(exit_code(&version), 0);
}

#[test]
fn text_format_renders_one_field_per_line() {
    let out = run(&["number", "--x", "3", "--base", "2,1", "--format", "text"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("status: ok\n"));
    assert!(text.contains("value: 7 + 0i\n"));
}

#[test]
fn oscillator_reports_all_relations() {
    let v = json_of(&run(&["oscillator", "--p", "0.8", "--q", "0.9", "--dim", "6"]));
    assert_eq!(v["status"], "ok");
    assert_eq!(v["diagnostics"]["subspace_dim"], 5);
    let residuals = v["diagnostics"]["residuals"]
        .as_object()
        .expect("residuals map");
    for key in ["defining_relation", "number_lowering", "number_raising"] {
        let r: f64 = residuals[key].as_str().unwrap().parse().unwrap();
        assert!(r < 1e-12, "{key} residual {r}");
    }
}

#[test]
fn fibonacci_lists_the_full_sequence() {
    let v = json_of(&run(&["fibonacci", "--base", "2,1", "--n-max", "5"]));
    let values = v["diagnostics"]["values"].as_array().expect("values list");
    assert_eq!(values.len(), 6);
    let res: Vec<&str> = values.iter().map(|e| e["re"].as_str().unwrap()).collect();
    assert_eq!(res, ["0", "1", "3", "7", "15", "31"]);
    assert_eq!(v["value"]["re"], "31");
}

#[test]
fn suite_output_is_deterministic_and_reports_counts() {
    let args = ["suite", "--name", "fibonacci", "--seed", "3", "--draws", "5"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let v = json_of(&first);
    let suite = &v["suites"][0];
    assert_eq!(suite["name"], "fibonacci");
    assert_eq!(suite["draws"], 5);
    assert_eq!(suite["passes"], 5);
    assert_eq!(suite["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn suite_rejects_zero_draws() {
    let out = run(&["suite", "--name", "fibonacci", "--draws", "0"]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(json_of(&out)["status"], "usage_error");
}
