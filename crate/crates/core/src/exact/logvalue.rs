use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::factor::factorize;
use super::interval::{ln_rat, Interval};
use super::place::PlaceQ;
use super::rat::{vp_rat, Rat};
use crate::{Error, Result};

/// A logarithmic magnitude at a place of `Q`.
///
/// At a prime `p` the value lies in `[lo, hi]·log p` with exact rational
/// endpoints (equal when the value is known exactly). At the archimedean
/// place it is a certified real interval.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogValue {
    Padic { p: BigInt, lo: Rat, hi: Rat },
    Archimedean(Interval),
}

impl LogValue {
    pub fn padic_exact(p: BigInt, r: Rat) -> Self {
        LogValue::Padic {
            p,
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn zero(v: &PlaceQ) -> Self {
        match v {
            PlaceQ::Prime(p) => Self::padic_exact(p.clone(), Rat::zero()),
            PlaceQ::Archimedean => LogValue::Archimedean(Interval::zero()),
        }
    }

    pub fn place(&self) -> PlaceQ {
        match self {
            LogValue::Padic { p, .. } => PlaceQ::Prime(p.clone()),
            LogValue::Archimedean(_) => PlaceQ::Archimedean,
        }
    }

    /// The exact coefficient of `log p`, when known exactly.
    pub fn exact_coefficient(&self) -> Option<&Rat> {
        match self {
            LogValue::Padic { lo, hi, .. } if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// Certified real enclosure.
    pub fn to_interval(&self, bits: u64) -> Interval {
        match self {
            LogValue::Padic { p, lo, hi } => {
                let lp = ln_rat(&Rat::from_integer(p.clone()), bits);
                let a = lp.mul_rat(lo, bits);
                let b = lp.mul_rat(hi, bits);
                a.hull(&b)
            }
            LogValue::Archimedean(i) => i.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (
                LogValue::Padic { p, lo, hi },
                LogValue::Padic {
                    p: q,
                    lo: lo2,
                    hi: hi2,
                },
            ) if p == q => Ok(LogValue::Padic {
                p: p.clone(),
                lo: lo + lo2,
                hi: hi + hi2,
            }),
            (LogValue::Archimedean(a), LogValue::Archimedean(b)) => {
                Ok(LogValue::Archimedean(a.add(b)))
            }
            _ => Err(Error::InvalidInput(
                "adding log values at different places".into(),
            )),
        }
    }

    /// Width of the enclosure as a float (upper bound).
    pub fn width_f64(&self, bits: u64) -> f64 {
        self.to_interval(bits).width_f64()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Padic { p, lo, hi } if lo == hi => write!(f, "({lo})*log({p})"),
            LogValue::Padic { p, lo, hi } => write!(f, "[{lo}, {hi}]*log({p})"),
            LogValue::Archimedean(i) => write!(f, "{i}"),
        }
    }
}

/// JSON view used by reports.
#[derive(Serialize)]
pub struct LogValueJson {
    pub place: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_p_coefficient: Option<[String; 2]>,
    pub lo: String,
    pub hi: String,
}

impl LogValue {
    pub fn to_json(&self, bits: u64, digits: u32) -> LogValueJson {
        let (lo, hi) = self.to_interval(bits).to_decimal(digits);
        let coeff = match self {
            LogValue::Padic { lo, hi, .. } => Some([lo.to_string(), hi.to_string()]),
            LogValue::Archimedean(_) => None,
        };
        LogValueJson {
            place: self.place().to_string(),
            log_p_coefficient: coeff,
            lo,
            hi,
        }
    }
}

/// `log |x|_v`.
pub fn log_abs(x: &Rat, v: &PlaceQ, bits: u64) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(match v {
        PlaceQ::Prime(p) => {
            LogValue::padic_exact(p.clone(), Rat::from_integer((-vp_rat(x, p)).into()))
        }
        PlaceQ::Archimedean => LogValue::Archimedean(ln_rat(&x.abs(), bits)),
    })
}

/// `log⁺ |x|_v = max(0, log |x|_v)`; zero is allowed and gives 0.
pub fn log_plus_abs(x: &Rat, v: &PlaceQ, bits: u64) -> LogValue {
    if x.is_zero() {
        return LogValue::zero(v);
    }
    match v {
        PlaceQ::Prime(p) => {
            let r = (-vp_rat(x, p)).max(0);
            LogValue::padic_exact(p.clone(), Rat::from_integer(r.into()))
        }
        PlaceQ::Archimedean => {
            if x.abs() <= Rat::from_integer(1.into()) {
                LogValue::Archimedean(Interval::zero())
            } else {
                LogValue::Archimedean(ln_rat(&x.abs(), bits))
            }
        }
    }
}

/// `Σ_v log |x|_v` over all places of `Q`, as a certified enclosure.
pub fn product_formula_check(x: &Rat, bits: u64) -> Result<Interval> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut primes: Vec<BigInt> = factorize(x.numer()).into_keys().collect();
    primes.extend(factorize(x.denom()).into_keys());
    let mut acc = log_abs(x, &PlaceQ::Archimedean, bits)?.to_interval(bits);
    for p in primes {
        acc = acc.add(&log_abs(x, &PlaceQ::Prime(p), bits)?.to_interval(bits));
    }
    Ok(acc)
}
