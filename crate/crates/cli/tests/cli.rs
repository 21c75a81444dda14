use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightforge"))
        .args(args)
        .output()
        .expect("spawn heightforge")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("heightforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn quasi_adelic_escape_rate_at_infinity() {
    let v = json_ok(&[
        "escape-rate",
        "--example",
        "quasi-adelic",
        "--place-k",
        "inf",
    ]);
    assert_eq!(v["value"], "1");
    assert_eq!(v["certification"], "ExactByHoleAvoidance");
}

#[test]
fn cantor_itineraries() {
    let v = json_ok(&[
        "escape-rate",
        "--example",
        "cantor-julia",
        "--itinerary",
        "(+-)*",
    ]);
    assert_eq!(v["value"], "-4/3");
    let v = json_ok(&[
        "escape-rate",
        "--example",
        "cantor-julia",
        "--itinerary",
        "(+)*",
    ]);
    assert_eq!(v["value"], "-1");
    let v = json_ok(&[
        "escape-rate",
        "--example",
        "cantor-julia",
        "--itinerary",
        "+(+-)*",
    ]);
    assert_eq!(v["value"], "-7/6");
}

#[test]
fn divisor_of_quasi_adelic() {
    let v = json_ok(&["divisor", "--example", "quasi-adelic"]);
    assert_eq!(v["divisor"], serde_json::json!({ "inf": "1" }));
    assert_eq!(v["degree"], "1");
    assert_eq!(v["exact"], true);
}

#[test]
fn no_hole_avoiding_map_file() {
    // tz^2 + w^2, tw^2
    let p = temp_file(
        "ex42.json",
        r#"{"d": 2, "P": [[0, 1], [], [1]], "Q": [[], [], [0, 1]]}"#,
    );
    let v = json_ok(&[
        "hole-avoiding",
        "--map",
        p.to_str().unwrap(),
        "--point",
        "0",
        "--place-k",
        "0",
    ]);
    assert_eq!(v["status"], "NotHoleAvoiding");
    assert_eq!(v["hit_at"], 2);
}

#[test]
fn malformed_inputs_exit_2() {
    let p = temp_file("bad.json", "{\"d\": 2, \"P\": ");
    assert_eq!(
        run(&["divisor", "--map", p.to_str().unwrap(), "--point", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["divisor", "--example", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "escape-rate",
            "--example",
            "quasi-adelic",
            "--place-k",
            "x/"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "vheight",
            "--example",
            "quasi-adelic",
            "--t",
            "1",
            "--tol",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn excluded_parameter_exit_3() {
    let out = run(&["vheight", "--example", "quasi-adelic", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn precision_cap_exit_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_heightforge"))
        .args([
            "escape-rate",
            "--example",
            "cantor-julia",
            "--place-k",
            "0",
            "--precision",
            "2",
        ])
        .env("HEIGHTFORGE_PRECISION_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn reproduce_divergent_prints_both_routes() {
    let v = json_ok(&["reproduce", "divergent-alpha", "--m", "2,50"]);
    assert_eq!(v["status"], "PASS");
    let cf = v["routes"]["closed_form"].as_array().unwrap();
    let jet = v["routes"]["jet"].as_array().unwrap();
    assert!(!cf.is_empty() && cf.len() == jet.len());
}

#[test]
fn reproduce_all_examples() {
    for name in [
        "quasi-adelic",
        "cantor-julia",
        "translation",
        "no-hole-avoiding",
    ] {
        assert_eq!(json_ok(&["reproduce", name])["status"], "PASS", "{name}");
    }
}

#[test]
fn sample_v_csv_is_deterministic() {
    let args = [
        "sample-v",
        "--example",
        "quasi-adelic",
        "--place-q",
        "inf",
        "--grid",
        "-2:2:9",
        "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    // t = 0 and t = 1 are excluded
    assert_eq!(rows.len(), 7);
    assert_eq!(&rows[0][0], "-2");
}

#[test]
fn out_flag_writes_file() {
    let p = std::env::temp_dir().join(format!("heightforge-out-{}.json", std::process::id()));
    let out = run(&[
        "divisor",
        "--example",
        "quasi-adelic",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["degree"], "1");
}

#[test]
fn specialized_escape_rate_and_certificate() {
    let v = json_ok(&[
        "escape-rate",
        "--example",
        "quasi-adelic",
        "--place-q",
        "inf",
        "--t",
        "3",
    ]);
    let lo: f64 = v["escape_rate"]["lo"].as_str().unwrap().parse().unwrap();
    assert!(lo > 1.0);
    let v = json_ok(&[
        "fatou-certificate",
        "--example",
        "no-hole-avoiding",
        "--place-k",
        "0",
        "--point",
        "1",
    ]);
    assert_eq!(v["found"], true);
}
