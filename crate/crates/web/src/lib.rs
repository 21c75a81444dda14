//! Browser bindings: each export takes plain strings and returns a JSON
//! string, so the page needs no bundler.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use heightforge::arithmetic::{sample_v, BITS};
use heightforge::catalog::{itinerary_escape_rate, named_example, Itinerary, EXAMPLE_NAMES};
use heightforge::exact::{parse_rat, PlaceQ, Rat};
use heightforge::format;
use heightforge::geometric::{divisor_of, EscapeOptions};

/// Largest grid the page may request; keeps the tab responsive.
pub const MAX_GRID: usize = 400;

fn text(v: Value) -> String {
    serde_json::to_string(&v).expect("plain data")
}

/// Divisor of escape rates for a built-in example, optionally at another point.
pub fn divisor_report(example: &str, point: &str) -> Result<String, String> {
    let ex = named_example(example).map_err(|e| e.to_string())?;
    let a = if point.trim().is_empty() {
        ex.a
    } else {
        format::parse_point(point).map_err(|e| e.to_string())?
    };
    let d = divisor_of(&ex.f, &a, &EscapeOptions::default()).map_err(|e| e.to_string())?;
    let mut v = format::divisor_json(&d);
    v["example"] = json!(ex.name);
    v["summary"] = json!(ex.summary);
    Ok(text(v))
}

/// Escape rate at `t = 0` of the Cantor example for an itinerary such as `"+(+-)*"`.
pub fn itinerary_report(itinerary: &str, depth: usize) -> Result<String, String> {
    let it: Itinerary = itinerary
        .parse()
        .map_err(|e: heightforge::Error| e.to_string())?;
    let r = itinerary_escape_rate(&it, depth.clamp(1, 200));
    let approx = (r.value.lo().to_f64_lossy() + r.value.hi().to_f64_lossy()) / 2.0;
    let mut v = format::escape_result_json(&r);
    v["itinerary"] = json!(it.to_string());
    v["approx"] = json!(approx);
    Ok(text(v))
}

trait Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl Lossy for Rat {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `V_v(t)` for the quasi-adelic example over `n` evenly spaced parameters in `[a, b]`.
pub fn v_samples(place: &str, a: &str, b: &str, n: usize) -> Result<String, String> {
    let v: PlaceQ = place
        .parse()
        .map_err(|e: heightforge::Error| e.to_string())?;
    let a = parse_rat(a).map_err(|e| e.to_string())?;
    let b = parse_rat(b).map_err(|e| e.to_string())?;
    if !(2..=MAX_GRID).contains(&n) {
        return Err(format!("number of points must lie in 2..={MAX_GRID}"));
    }
    let step = (&b - &a) / Rat::from_integer((n as i64 - 1).into());
    let grid: Vec<Rat> = (0..n)
        .map(|k| &a + &step * Rat::from_integer((k as i64).into()))
        .collect();
    let ex = named_example("quasi-adelic").map_err(|e| e.to_string())?;
    let div = divisor_of(&ex.f, &ex.a, &EscapeOptions::default()).map_err(|e| e.to_string())?;
    let rows = sample_v(&ex.f, &ex.a, &div, &grid, &v, 1e-9).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let (lo, hi) = r.v.to_interval(BITS).to_f64();
            json!({ "t": r.t0.to_string(), "t_approx": r.t0.to_f64_lossy(), "lo": lo, "hi": hi })
        })
        .collect();
    Ok(text(json!({ "place": v.to_string(), "rows": rows })))
}

#[wasm_bindgen]
pub fn examples() -> String {
    text(json!(EXAMPLE_NAMES))
}

#[wasm_bindgen]
pub fn divisor(example: &str, point: &str) -> Result<String, JsValue> {
    divisor_report(example, point).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn itinerary_escape(itinerary: &str, depth: usize) -> Result<String, JsValue> {
    itinerary_report(itinerary, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_height_difference(
    place: &str,
    a: &str,
    b: &str,
    n: usize,
) -> Result<String, JsValue> {
    v_samples(place, a, b, n).map_err(|e| JsValue::from_str(&e))
}
