use heightforge_web::{divisor_report, itinerary_report, v_samples};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn divisor_of_default_point() {
    let v = parse(divisor_report("quasi-adelic", "").unwrap());
    assert_eq!(v["divisor"]["inf"], "1");
    assert_eq!(v["degree"], "1");
    assert!(divisor_report("nope", "").is_err());
    assert!(divisor_report("quasi-adelic", "1,x").is_err());
}

#[test]
fn itinerary_values() {
    let v = parse(itinerary_report("(+-)*", 40).unwrap());
    assert_eq!(v["value"], "-4/3");
    let v = parse(itinerary_report("+-+", 40).unwrap());
    assert!(v["value"]["lo"].is_string());
    assert!(itinerary_report("+x", 40).is_err());
}

#[test]
fn samples_skip_excluded() {
    let v = parse(v_samples("inf", "-1", "1", 5).unwrap());
    // 0 and 1 are excluded parameters
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v_samples("inf", "0", "1", 1).is_err());
    assert!(v_samples("q", "0", "1", 4).is_err());
}
