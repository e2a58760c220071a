//! Golden-file tests for the command-line interface. Each case runs the
//! binary, checks the exit code and a few semantic properties, then compares
//! the json record (minus `timing_ms`) against `tests/golden/<name>.json`.
//!
//! Set `PEANOQUAD_BLESS=1` to rewrite the golden files.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_peanoquad"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn without_timing(stdout: &str) -> Value {
    let mut v: Value = serde_json::from_str(stdout).expect("stdout is json");
    let obj = v.as_object_mut().expect("record is an object");
    assert!(obj.remove("timing_ms").is_some(), "record has timing_ms");
    v
}

fn golden(name: &str, record: &Value) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{name}.json")]
        .iter()
        .collect();
    let actual = serde_json::to_string_pretty(record).unwrap() + "\n";
    if std::env::var_os("PEANOQUAD_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; rerun with PEANOQUAD_BLESS=1", path.display()));
    assert_eq!(expected, actual, "golden mismatch for {name}");
}

/// Runs, checks the exit code, compares against the golden file and returns
/// the record.
fn case(name: &str, args: &[&str], code: i32) -> (Value, Run) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let r = run(&full);
    assert_eq!(r.code, code, "{name}: stderr was {}", r.stderr);
    let v = without_timing(&r.stdout);
    golden(name, &v);
    (v, r)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn integrate_quartic_uniform() {
    let (v, _) = case(
        "integrate_quartic_uniform",
        &["integrate", "--expr", "t^4", "--a", "0", "--b", "1", "--rule", "simpson", "--eps", "1e-6", "--mode", "uniform"],
        0,
    );
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["status"], "ok");
    let r = &v["results"];
    assert!(num(&r["bound"]) <= 1e-6);
    assert!((num(&r["estimate"]) - 0.2).abs() <= num(&r["bound"]));
    assert_eq!(r["panels"]["count"], 273);
}

#[test]
fn integrate_syntax_error() {
    let (v, r) = case(
        "integrate_syntax_error",
        &["integrate", "--expr", "2+", "--a", "0", "--b", "1", "--eps", "1e-6"],
        1,
    );
    assert_eq!(v["status"], "parse_error");
    assert!(r.stderr.contains("offset 2"), "{}", r.stderr);
    assert!(v["results"].is_null());
}

#[test]
fn integrate_singular_second_derivative() {
    let (v, r) = case(
        "integrate_sqrt",
        &["integrate", "--expr", "sqrt(t)", "--a", "0", "--b", "1", "--eps", "1e-6"],
        2,
    );
    assert_eq!(v["status"], "uncertifiable");
    assert!(r.stderr.contains("sqrt(t)"));
    let r = run(&["integrate", "--expr", "sqrt(t)", "--a", "0", "--b", "1", "--mode", "single"]);
    assert_eq!(r.code, 2);
}

#[test]
fn integrate_sine_boole_uniform() {
    let (v, _) = case(
        "integrate_sine_boole",
        &["integrate", "--expr", "sin(t)", "--a", "0", "--b", "pi", "--rule", "boole", "--eps", "1e-8", "--mode", "uniform"],
        0,
    );
    assert!((num(&v["results"]["estimate"]) - 2.0).abs() <= 1e-8);
}

#[test]
fn integrate_gaussian_adaptive() {
    let (v, _) = case(
        "integrate_gaussian_adaptive",
        &[
            "integrate", "--expr", "exp(-t^2)", "--a", "0", "--b", "2", "--rule", "boole", "--eps", "1e-10",
            "--max-panels", "1000000",
        ],
        0,
    );
    assert!((num(&v["results"]["estimate"]) - 0.8820813908).abs() <= 1e-10);
}

#[test]
fn integrate_single_panel_with_list() {
    let (v, _) = case(
        "integrate_single_boole",
        &["integrate", "--expr", "t^6", "--a", "0", "--b", "1", "--rule", "boole", "--mode", "single", "--list-panels"],
        0,
    );
    let r = &v["results"];
    assert!((num(&r["estimate"]) - 0.1432291666666667).abs() <= 1e-15);
    let list = r["panels"]["list"].as_array().unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(num(&list[0]["a"]), 0.0);
    assert_eq!(num(&list[0]["b"]), 1.0);
}

#[test]
fn integrate_single_panel_misses_eps() {
    let (v, _) = case(
        "integrate_single_tolerance",
        &["integrate", "--expr", "t^6", "--a", "0", "--b", "1", "--rule", "boole", "--mode", "single", "--eps", "1e-6"],
        2,
    );
    assert_eq!(v["status"], "tolerance_failed");
    assert!(num(&v["results"]["bound"]) > 1e-6);
}

#[test]
fn integrate_budget_exhausted_keeps_partial_result() {
    let (v, _) = case(
        "integrate_budget",
        &["integrate", "--expr", "exp(t)", "--a", "0", "--b", "1", "--eps", "1e-14", "--max-panels", "4"],
        2,
    );
    assert_eq!(v["status"], "budget_exhausted");
    assert_eq!(v["results"]["panels"]["count"], 4);
}

#[test]
fn integrate_usage_errors() {
    let r = run(&["integrate", "--expr", "t", "--a", "0", "--b", "1"]);
    assert_eq!(r.code, 1, "eps is required in adaptive mode");
    let r = run(&["integrate", "--expr", "t", "--a", "1", "--b", "0", "--eps", "1e-3"]);
    assert_eq!(r.code, 1);
    assert_eq!(without_timing(&r.stdout)["status"], "invalid_input");
    let r = run(&["integrate", "--expr", "t", "--a", "0", "--b", "1", "--rule", "midpoint"]);
    assert_eq!(r.code, 1);
    let r = run(&["integrate", "--bogus"]);
    assert_eq!(r.code, 1);
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("verify-kernels"));
}

#[test]
fn bounds_quartic() {
    let (v, _) = case("bounds_quartic", &["bounds", "--expr", "t^4", "--a", "0", "--b", "1", "--rule", "simpson"], 0);
    let r = &v["results"];
    assert!((num(&r["peano_like"]) - 12.0 / 162.0).abs() <= 1e-12);
    assert!((num(&r["peano"]) - 12.0 / 81.0).abs() <= 1e-12);
    assert!((num(&r["ratio"]) - 0.5).abs() <= 1e-12);
    assert!((num(&r["true_error"]) - 1.0 / 120.0).abs() <= 1e-12);
    assert_eq!(r["gamma_source"], "enclosure");
}

#[test]
fn bounds_symmetric_cubic() {
    let (v, _) = case("bounds_cubic", &["bounds", "--expr", "t^3", "--a", "-1", "--b", "1", "--rule", "simpson"], 0);
    let r = &v["results"];
    assert!((num(&r["ratio"]) - 1.0).abs() <= 1e-12);
    assert!((num(&r["peano_like"]) - 16.0 / 27.0).abs() <= 1e-12);
}

#[test]
fn bounds_constant_second_derivative() {
    for rule in ["simpson", "simpson38", "boole"] {
        let r = run(&["bounds", "--expr", "t^2", "--a", "0", "--b", "1", "--rule", rule]);
        assert_eq!(r.code, 0);
        let v = without_timing(&r.stdout);
        // Γ - γ is only inflation, so the two-sided bound vanishes; the
        // sup-norm bound does not, since ‖f''‖ = 2.
        assert!(num(&v["results"]["peano_like"]) <= 1e-14, "{rule}");
        assert!(num(&v["results"]["peano"]) > 1e-3, "{rule}");
    }
    let (v, _) = case("bounds_linear", &["bounds", "--expr", "t", "--a", "0", "--b", "1", "--rule", "boole"], 0);
    assert_eq!(num(&v["results"]["peano_like"]), 0.0);
    assert_eq!(num(&v["results"]["peano"]), 0.0);
    assert_eq!(num(&v["results"]["ratio"]), 1.0);
}

#[test]
fn bounds_overrides() {
    let (v, _) = case(
        "bounds_override",
        &["bounds", "--expr", "t^4", "--a", "0", "--b", "1", "--gamma", "-12", "--Gamma", "12"],
        0,
    );
    assert_eq!(v["results"]["gamma_source"], "override");
    assert!((num(&v["results"]["ratio"]) - 1.0).abs() <= 1e-15);
    let r = run(&["bounds", "--expr", "t^4", "--a", "0", "--b", "1", "--gamma", "3", "--Gamma", "1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn verify_kernels_defaults() {
    let (v, _) = case("verify_kernels_default", &["verify-kernels"], 0);
    let kernels = v["results"]["kernels"].as_array().unwrap();
    let want = [1.0 / 27.0, 1.0 / 24.0, 2036.0 / 6075.0];
    for (k, w) in kernels.iter().zip(want) {
        assert!((num(&k["closed_form"]) - w).abs() <= 1e-12 * w);
        assert!((num(&k["oracle"]) - w).abs() <= 1e-5);
    }
    assert_eq!(kernels[2]["expected_unit"], "2036/6075");
}

#[test]
fn verify_kernels_scales_with_width() {
    let (v, _) = case("verify_kernels_width2", &["verify-kernels", "--a", "0", "--b", "2"], 0);
    let (u, _) = case("verify_kernels_default", &["verify-kernels"], 0);
    for i in 0..3 {
        let wide = num(&v["results"]["kernels"][i]["closed_form"]);
        let unit = num(&u["results"]["kernels"][i]["closed_form"]);
        assert_eq!(wide, 16.0 * unit);
    }
}

#[test]
fn verify_kernels_coarse_oracle() {
    let (v, _) = case("verify_kernels_coarse", &["verify-kernels", "--oracle-n", "1000"], 0);
    for k in v["results"]["kernels"].as_array().unwrap() {
        assert!(num(&k["oracle_abs_error"]) <= 1e-2);
        assert_eq!(num(&k["closed_form_rel_error"]), 0.0);
    }
    assert_eq!(run(&["verify-kernels", "--oracle-n", "10"]).code, 1);
}

#[test]
fn parse_prints_sexpr() {
    for (src, want) in [("t^2+1", "(+ (^ t 2) 1)"), ("-t^2", "(neg (^ t 2))")] {
        let r = run(&["parse", "--expr", src]);
        assert_eq!(r.code, 0);
        assert_eq!(r.stdout, format!("{want}\n"));
    }
    let (v, _) = case("parse_sum", &["parse", "--expr", "t^2+1"], 0);
    assert_eq!(v["results"]["sexpr"], "(+ (^ t 2) 1)");
}

#[test]
fn parse_requires_parentheses() {
    let (v, r) = case("parse_sin_without_parens", &["parse", "--expr", "sin t"], 1);
    assert_eq!(v["status"], "parse_error");
    assert!(r.stderr.contains("offset 4"), "{}", r.stderr);
    assert!(r.stderr.contains("    ^"), "caret under the offending token: {}", r.stderr);
}

#[test]
fn csv_and_text_formats() {
    let args = ["integrate", "--expr", "t^2", "--a", "0", "--b", "1", "--eps", "1e-9"];
    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(csv.code, 0);
    let mut lines = csv.stdout.lines();
    assert_eq!(lines.next(), Some("key,value"));
    let rows: Vec<(&str, &str)> = lines.map(|l| l.split_once(',').unwrap()).collect();
    assert!(rows.contains(&("schema_version", "1")));
    assert!(rows.contains(&("results.estimate", "3.3333333333333331e-1")));
    assert!(rows.iter().any(|(k, _)| *k == "results.panels.count"));

    let text = run(&[&args[..], &["--format", "text"]].concat());
    assert!(text.stdout.starts_with("integrate ok\n"));
    assert!(text.stdout.contains("  estimate: 3.3333333333333331e-1"));
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "integrate", "--expr", "sin(3*t)*exp(-t)", "--a", "0", "--b", "4", "--rule", "simpson38", "--eps", "1e-9",
        "--list-panels",
    ];
    let first = without_timing(&run(&args).stdout);
    let second = without_timing(&run(&args).stdout);
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
}
