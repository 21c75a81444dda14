//! JSON interchange for maps, points and results.
//!
//! A map is `{"d": 2, "P": [[...], ...], "Q": [[...], ...]}` where `P[i][j]`
//! is the coefficient of `z^(d-i) w^i t^j`; a point is
//! `{"z": [...], "w": [...]}` with coefficient arrays in `t`. Rationals may be
//! JSON integers or strings such as `"-3/4"`. Output rationals are strings.

use serde_json::{json, Map, Value};

use crate::arithmetic::{HeightReport, BITS};
use crate::exact::{parse_rat, Interval, LogValue, PlaceK, PlaceQ, PolyQ, Rat, RationalFunction};
use crate::fatou::FatouCertificate;
use crate::geometric::{Certification, DivisorQ, EscapeRateResult, EscapeValue};
use crate::lift::{BinaryForm, HomogeneousLift, LiftK, PointK, ProjPoint};
use crate::{Error, Result};

/// Decimal digits used for real enclosures in reports.
pub const DIGITS: u32 = 15;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn rat_of(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
        Value::Number(n) if n.is_u64() => Ok(Rat::from_integer(n.as_u64().unwrap().into())),
        Value::String(s) => parse_rat(s),
        other => Err(bad(format!(
            "expected an integer or rational string, got {other}"
        ))),
    }
}

fn poly_of(v: &Value) -> Result<RationalFunction> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(format!("expected a coefficient array, got {v}")))?;
    let cs = arr.iter().map(rat_of).collect::<Result<Vec<_>>>()?;
    Ok(RationalFunction::from_poly(PolyQ::new(cs)))
}

fn form_of(v: &Value, d: usize, name: &str) -> Result<BinaryForm<RationalFunction>> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad(format!("{name} must be an array")))?;
    if rows.len() != d + 1 {
        return Err(bad(format!(
            "{name} needs {} rows for degree {d}, got {}",
            d + 1,
            rows.len()
        )));
    }
    Ok(BinaryForm::new(
        rows.iter().map(poly_of).collect::<Result<_>>()?,
    ))
}

pub fn map_from_value(v: &Value) -> Result<LiftK> {
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer field \"d\""))? as usize;
    if d < 2 {
        return Err(bad("degree must be at least 2"));
    }
    let p = form_of(
        v.get("P").ok_or_else(|| bad("missing field \"P\""))?,
        d,
        "P",
    )?;
    let q = form_of(
        v.get("Q").ok_or_else(|| bad("missing field \"Q\""))?,
        d,
        "Q",
    )?;
    let f = HomogeneousLift::new(p, q).map_err(|e| bad(e.to_string()))?;
    if f.resultant().is_zero() {
        return Err(bad("P and Q share a factor (zero resultant)"));
    }
    Ok(f)
}

pub fn parse_map(text: &str) -> Result<LiftK> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    map_from_value(&v)
}

fn poly_json(c: &RationalFunction) -> Result<Value> {
    if !c.den().is_one() {
        return Err(Error::InvalidInput(
            "only polynomial coefficients can be written".into(),
        ));
    }
    Ok(Value::Array(
        c.num()
            .coeffs()
            .iter()
            .map(|r| Value::String(r.to_string()))
            .collect(),
    ))
}

pub fn map_to_value(f: &LiftK) -> Result<Value> {
    let rows = |b: &BinaryForm<RationalFunction>| -> Result<Value> {
        Ok(Value::Array(
            b.coeffs.iter().map(poly_json).collect::<Result<_>>()?,
        ))
    };
    Ok(json!({ "d": f.degree(), "P": rows(&f.p)?, "Q": rows(&f.q)? }))
}

pub fn point_from_value(v: &Value) -> Result<PointK> {
    let z = poly_of(v.get("z").ok_or_else(|| bad("point needs \"z\""))?)?;
    let w = poly_of(v.get("w").ok_or_else(|| bad("point needs \"w\""))?)?;
    ProjPoint::new(z, w).map_err(|_| bad("point (0, 0)"))
}

pub fn point_to_value(a: &PointK) -> Result<Value> {
    Ok(json!({ "z": poly_json(&a.z)?, "w": poly_json(&a.w)? }))
}

/// `"inf"`, a JSON point object, or comma-separated coefficients
/// `c0,c1,...` of the affine value `a(t) = Σ c_j t^j`.
pub fn parse_point(spec: &str) -> Result<PointK> {
    let s = spec.trim();
    if matches!(s, "inf" | "infinity") {
        return Ok(ProjPoint::infinity());
    }
    if s.starts_with('{') {
        let v: Value =
            serde_json::from_str(s).map_err(|e| bad(format!("invalid point JSON: {e}")))?;
        return point_from_value(&v);
    }
    let cs = s.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
    Ok(ProjPoint::affine(RationalFunction::from_poly(PolyQ::new(
        cs,
    ))))
}

pub fn escape_value_json(v: &EscapeValue) -> Value {
    match v {
        EscapeValue::Exact(r) => Value::String(r.to_string()),
        EscapeValue::Interval(lo, hi) => json!({ "lo": lo.to_string(), "hi": hi.to_string() }),
    }
}

fn certification_json(c: &Certification) -> Value {
    match c {
        Certification::ExactByDetectedPeriod {
            preperiod,
            period,
            repetitions_observed,
        } => json!({
            "kind": c.name(), "preperiod": preperiod, "period": period, "repetitions_observed": repetitions_observed
        }),
        Certification::ExactByItinerary { preperiod, period } => {
            json!({ "kind": c.name(), "preperiod": preperiod, "period": period })
        }
        _ => json!({ "kind": c.name() }),
    }
}

pub fn escape_result_json(r: &EscapeRateResult) -> Value {
    json!({
        "place": r.gamma.to_string(),
        "value": escape_value_json(&r.value),
        "certification": r.certification.name(),
        "certification_detail": certification_json(&r.certification),
        "sigma_prefix": r.sigma_prefix,
    })
}

pub fn divisor_json(d: &DivisorQ) -> Value {
    let entries: Map<String, Value> = d
        .entries
        .iter()
        .map(|(g, v)| (g.to_string(), escape_value_json(v)))
        .collect();
    let places: Map<String, Value> = d
        .results
        .iter()
        .map(|(g, r)| (g.to_string(), escape_result_json(r)))
        .collect();
    json!({
        "divisor": entries,
        "degree": escape_value_json(&d.degree),
        "exact": d.is_exact(),
        "places": places,
    })
}

pub fn interval_json(i: &Interval) -> Value {
    let (lo, hi) = i.to_decimal(DIGITS);
    json!({ "lo": lo, "hi": hi })
}

pub fn log_value_json(v: &LogValue) -> Value {
    serde_json::to_value(v.to_json(BITS, DIGITS)).expect("plain data")
}

pub fn height_report_json(r: &HeightReport) -> Value {
    let per: Map<String, Value> = r
        .per_place
        .iter()
        .map(|(v, g)| (v.to_string(), log_value_json(g)))
        .collect();
    let vv: Map<String, Value> =
        r.v.iter()
            .map(|(v, g)| (v.to_string(), log_value_json(g)))
            .collect();
    json!({
        "t": r.t0.to_string(),
        "per_place": per,
        "canonical_height": interval_json(&r.canonical),
        "weil_height_D": interval_json(&r.weil_hd),
        "V": vv,
        "V_total": interval_json(&r.v_total),
    })
}

pub fn certificate_json(c: &FatouCertificate) -> Value {
    let m = &c.b;
    json!({
        "matrix": [[m.a.to_string(), m.b.to_string()], [m.c.to_string(), m.d.to_string()]],
        "label": c.label,
        "candidate_index": c.index,
        "n": c.n,
        "m": c.m,
        "verdict": serde_json::to_value(&c.verdict).expect("plain data"),
    })
}

pub fn place_k_json(g: &PlaceK) -> Value {
    Value::String(g.to_string())
}

pub fn place_q_json(v: &PlaceQ) -> Value {
    Value::String(v.to_string())
}
