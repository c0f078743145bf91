use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_padic-embed"));
    c.env_remove("PADIC_EMBED_P_MAX");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn field_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const SQRT2: &str =
    r#"{"defining_poly": ["-2", "0", "1"], "elements": {"alpha": {"num": ["0", "1"]}}}"#;
const BIQUADRATIC: &str = r#"{"defining_poly": [1, 0, -10, 0, 1],
  "elements": {"sqrt2": {"num": [0, -9, 0, 1], "den": 2}, "sqrt3": {"num": [0, 11, 0, -1], "den": 2}},
  "generators": ["sqrt2", "sqrt3"]}"#;

#[test]
fn embed_sqrt2_json_report() {
    let f = field_file(SQRT2);
    let out = run(&[
        "embed",
        "--field",
        f.path().to_str().unwrap(),
        "--elements",
        "alpha",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let r = &v["result"]["embedding"];
    assert_eq!(r["p"], 7);
    assert_eq!(r["root_mod_p"], 3);
    assert_eq!(r["element_valuations"]["alpha"], 0);
    assert_eq!(r["element_valuations"]["alpha^-1"], 0);
    assert_eq!(r["eta_digits"][0], 3);
    assert_eq!(
        r["skipped_primes"][0],
        serde_json::json!([2, "discriminant"])
    );
}

#[test]
fn embed_from_generators() {
    let f = field_file(BIQUADRATIC);
    let out = run(&[
        "embed",
        "--field",
        f.path().to_str().unwrap(),
        "--elements",
        "sqrt2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["primitive"]["tuple"], serde_json::json!([1, 1]));
    for (_, val) in v["result"]["embedding"]["element_valuations"]
        .as_object()
        .unwrap()
    {
        assert_eq!(val, 0);
    }
}

#[test]
fn cyclotomic_shortcut() {
    let out = run(&["embed", "--cyclotomic", "5", "--elements", "1:1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["embedding"]["p"], 11);
}

#[test]
fn reports_are_reproducible_and_worker_independent() {
    let f = field_file(BIQUADRATIC);
    let p = f.path().to_str().unwrap();
    let a = run(&[
        "embed",
        "--field",
        p,
        "--elements",
        "sqrt2,sqrt3",
        "--json",
        "--workers",
        "1",
    ]);
    let b = run(&[
        "embed",
        "--field",
        p,
        "--elements",
        "sqrt2,sqrt3",
        "--json",
        "--workers",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
    // the emitted report parses and re-running gives identical bytes
    let v = json(&a);
    assert_eq!(
        serde_json::to_string_pretty(&v).unwrap() + "\n",
        String::from_utf8(a.stdout).unwrap()
    );
}

#[test]
fn exit_codes() {
    let f = field_file(SQRT2);
    let p = f.path().to_str().unwrap();
    assert_eq!(
        run(&["embed", "--field", p, "--elements", "alpha", "--p-max", "5"])
            .status
            .code(),
        Some(4)
    );
    let out = bin()
        .args(["embed", "--field", p, "--elements", "alpha"])
        .env("PADIC_EMBED_P_MAX", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(
        run(&["heights", "--poly", "not a poly"]).status.code(),
        Some(2)
    );
    let bad = field_file("{");
    assert_eq!(
        run(&[
            "embed",
            "--field",
            bad.path().to_str().unwrap(),
            "--elements",
            "a"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["embed", "--bogus"]).status.code(), Some(2));
    // √2 alone does not generate the quartic field
    let f = field_file(BIQUADRATIC);
    let out = run(&[
        "primitive",
        "--field",
        f.path().to_str().unwrap(),
        "--generators",
        "sqrt2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn modular_subcommands() {
    let out = run(&[
        "simple-root-prime",
        "--poly",
        "[-2,0,1]",
        "--q",
        "6",
        "--json",
    ]);
    let v = json(&out);
    assert_eq!(
        (v["result"]["p"].clone(), v["result"]["a"].clone()),
        (7.into(), 3.into())
    );
    let v = json(&run(&["generic-prime", "--poly", "[1,0,1]", "--json"]));
    assert_eq!(v["result"]["p"], "5");
    assert_eq!(v["result"]["bound"], "32");
    let v = json(&run(&["delta", "--m", "20", "--json"]));
    assert_eq!(v["result"]["delta"], 2);
    let out = run(&[
        "verify-lemmas",
        "--poly",
        "[-2,0,0,1]",
        "--product-l",
        "357",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["product"]["product"]["holds"], true);
}

#[test]
fn heights_text() {
    let out = run(&["heights", "--poly", "[-2,0,1]"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("H = 2"));
    assert!(s.contains("h = 0.34657"));
}

#[test]
fn bounds_and_sharpness() {
    let inputs = field_file(r#"{"d": 2, "H": 1, "M": 2, "case": 2}"#);
    let out = run(&[
        "bounds",
        "--name",
        "generic-prime",
        "--inputs",
        inputs.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["result"]["bound_value"].as_f64().unwrap() - 32.0).abs() < 1e-9);
    let out = run(&[
        "bounds",
        "--name",
        "nope",
        "--inputs",
        inputs.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&run(&[
        "sharpness",
        "primes",
        "--n",
        "2",
        "--r",
        "3",
        "--json",
    ]));
    assert_eq!(v["result"]["least_good_prime"], 17);
    let out = run(&["sharpness", "quadratic", "--k", "15", "--t", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["holds"], true);
    assert_eq!(
        run(&["sharpness", "quadratic", "--k", "7", "--t", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_all_quick_and_fault() {
    let out = run(&["verify-all", "--scope", "quick"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let out = run(&["verify-all", "--inject-fault", "discriminant-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("failing checks: discriminant-bound"), "{s}");
}
