use super::local::{normalize_point_at, ord_of_lift, LiftK, PointK};
use crate::exact::{laurent_expand, ord_at, LaurentJet, PlaceK, Rat, RationalFunction};
use crate::{Error, Result};

/// Environment variable overriding the precision cap.
pub const PRECISION_CAP_ENV: &str = "HEIGHTFORGE_PRECISION_CAP";

/// Global cap on jet precision (coefficients).
pub fn precision_cap() -> usize {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(4096)
}

/// Start precision and cap for jet iteration; precision doubles on indeterminacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: usize,
    pub cap: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: 16,
            cap: precision_cap(),
        }
    }
}

/// Starting point of a jet orbit.
#[derive(Clone, Debug)]
pub enum JetStart {
    /// An exact point; it is normalized at the place and expanded to any precision.
    Exact(PointK),
    /// A fixed pair of jets (valuation 0 after normalization); precision cannot grow.
    Jets(LaurentJet, LaurentJet),
}

/// Jet orbit of a lift normalized at a place.
///
/// `jets[i] = Â_i` is the `i`-th iterate in a unit chart: `(x, 1)` when the
/// second coordinate is a unit, else `(1, y)`. The normalized start satisfies
/// `A_0 = s_0·Â_0` and each step `F(Â_(i-1)) = u^σ_(i-1) · s_i · Â_i` with
/// `s_i` a unit series; `scalars[i] = s_i(0)`.
#[derive(Clone, Debug)]
pub struct JetOrbit {
    pub place: PlaceK,
    pub jets: Vec<(LaurentJet, LaurentJet)>,
    pub sigma: Vec<i64>,
    pub scalars: Vec<Rat>,
    /// Precision (coefficients) of the successful run.
    pub precision: usize,
    /// `ord_γ` of the starting point before normalization (0 for jet starts).
    pub point_ord: i64,
}

fn expand(c: &RationalFunction, g: &PlaceK, abs: i64) -> LaurentJet {
    if c.is_zero() {
        return LaurentJet::exact_zero(g.clone());
    }
    let v = ord_at(c, g).expect("nonzero");
    if v >= abs {
        return LaurentJet::indeterminate(g.clone(), abs);
    }
    laurent_expand(c, g, (abs - v) as usize).expect("nonzero, positive precision")
}

fn eval_form(coeffs: &[LaurentJet], x: &LaurentJet, y: &LaurentJet, g: &PlaceK) -> LaurentJet {
    let d = coeffs.len() - 1;
    // Index k holds the (k+1)-th power.
    let mut xp = vec![x.clone()];
    let mut yp = vec![y.clone()];
    for k in 1..d {
        xp.push(xp[k - 1].mul(x));
        yp.push(yp[k - 1].mul(y));
    }
    let mut acc = LaurentJet::exact_zero(g.clone());
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        let mut term = c.clone();
        if d - i > 0 {
            term = term.mul(&xp[d - i - 1]);
        }
        if i > 0 {
            term = term.mul(&yp[i - 1]);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Scales `(u, v)` so that a unit coordinate becomes exactly 1.
fn to_unit_chart(
    u: &LaurentJet,
    v: &LaurentJet,
    g: &PlaceK,
) -> Option<((LaurentJet, LaurentJet), Rat)> {
    let unit = |j: &LaurentJet| j.exact_leading && j.val == 0;
    let one = |abs: i64| {
        LaurentJet::constant(g.clone(), Rat::from_integer(1.into()), abs.max(1) as usize)
    };
    if unit(v) {
        let x = u.div(v).ok()?;
        let abs = v.abs_precision();
        Some(((x, one(abs)), v.coeffs[0].clone()))
    } else if unit(u) {
        let y = v.div(u).ok()?;
        let abs = u.abs_precision();
        Some(((one(abs), y), u.coeffs[0].clone()))
    } else {
        None
    }
}

/// How a run of [`run`] ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Complete,
    /// A valuation could not be certified at this precision.
    Precision,
    /// Coefficients outgrew the bit budget.
    Budget,
}

fn jet_bits(j: &LaurentJet) -> u64 {
    j.coeffs
        .iter()
        .map(|c| c.numer().bits() + c.denom().bits())
        .max()
        .unwrap_or(0)
}

/// Runs up to `n` steps and reports why it stopped.
fn run(
    f: &LiftK,
    start: (LaurentJet, LaurentJet),
    g: &PlaceK,
    n: usize,
    p: usize,
    point_ord: i64,
    bit_budget: u64,
) -> Option<(JetOrbit, Stop)> {
    let abs = p as i64;
    let fp: Vec<LaurentJet> = f.p.coeffs.iter().map(|c| expand(c, g, abs)).collect();
    let fq: Vec<LaurentJet> = f.q.coeffs.iter().map(|c| expand(c, g, abs)).collect();
    let (mut cur, s0) = to_unit_chart(&start.0, &start.1, g)?;
    let mut orbit = JetOrbit {
        place: g.clone(),
        jets: vec![cur.clone()],
        sigma: Vec::with_capacity(n),
        scalars: vec![s0],
        precision: p,
        point_ord,
    };
    for _ in 0..n {
        let u = eval_form(&fp, &cur.0, &cur.1, g);
        let v = eval_form(&fq, &cur.0, &cur.1, g);
        // σ = min(val u, val v) is certain when the smaller exact valuation is
        // not beyond the other coordinate's known precision.
        let s = match (u.exact_leading, v.exact_leading) {
            (true, true) => u.val.min(v.val),
            (true, false) if u.val <= v.abs_precision() => u.val,
            (false, true) if v.val <= u.abs_precision() => v.val,
            _ => return Some((orbit, Stop::Precision)),
        };
        let (u, v) = (u.shift(-s), v.shift(-s));
        let Some((next, sc)) = to_unit_chart(&u, &v, g) else {
            return Some((orbit, Stop::Precision));
        };
        orbit.sigma.push(s);
        orbit.scalars.push(sc);
        orbit.jets.push(next.clone());
        if jet_bits(&next.0).max(jet_bits(&next.1)) > bit_budget {
            return Some((orbit, Stop::Budget));
        }
        cur = next;
    }
    Some((orbit, Stop::Complete))
}

/// Iterates `F` on `A` at `γ` with truncated expansions, returning the
/// normalized jets, the σ-sequence and the unit scalars. Precision doubles
/// (from `policy.start` up to `policy.cap`) whenever a valuation cannot be
/// certified.
pub fn iterate_jet(
    f: &LiftK,
    a: &JetStart,
    g: &PlaceK,
    n: usize,
    policy: PrecisionPolicy,
) -> Result<JetOrbit> {
    let o = ord_of_lift(f, g);
    if o != 0 {
        return Err(Error::NotNormalized(o));
    }
    match a {
        JetStart::Exact(pt) => {
            let (an, b) = normalize_point_at(pt, g);
            let point_ord = -ord_at(&b, g).expect("nonzero");
            let mut p = policy.start.max(1);
            loop {
                let start = (expand(&an.z, g, p as i64), expand(&an.w, g, p as i64));
                if let Some((orbit, Stop::Complete)) = run(f, start, g, n, p, point_ord, u64::MAX) {
                    return Ok(orbit);
                }
                if p >= policy.cap {
                    return Err(Error::PrecisionExhausted(p));
                }
                p = (2 * p).min(policy.cap);
            }
        }
        JetStart::Jets(x, y) => match iterate_jet_prefix(f, x, y, g, n)? {
            orbit if orbit.sigma.len() == n => Ok(orbit),
            orbit => Err(Error::PrecisionExhausted(orbit.precision)),
        },
    }
}

/// Iterates from a fixed pair of jets and returns the longest certified
/// prefix of at most `n` steps.
pub fn iterate_jet_prefix(
    f: &LiftK,
    x: &LaurentJet,
    y: &LaurentJet,
    g: &PlaceK,
    n: usize,
) -> Result<JetOrbit> {
    let o = ord_of_lift(f, g);
    if o != 0 {
        return Err(Error::NotNormalized(o));
    }
    let p = x.abs_precision().min(y.abs_precision()).max(0) as usize;
    run(f, (x.clone(), y.clone()), g, n, p, 0, u64::MAX)
        .map(|(orbit, _)| orbit)
        .ok_or(Error::PrecisionExhausted(p))
}

/// Default cap (bits of numerator plus denominator) on a single jet
/// coefficient in [`iterate_jet_bounded`]. Heights roughly double per step
/// on generic maps, so this bounds the depth rather than the precision.
pub const JET_BIT_BUDGET: u64 = 1 << 11;

/// Like [`iterate_jet`] from an exact point, except that a run whose
/// coefficients outgrow `bit_budget` ends early and returns its certified
/// prefix. Running out of precision is still an error.
pub fn iterate_jet_bounded(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    n: usize,
    policy: PrecisionPolicy,
    bit_budget: u64,
) -> Result<JetOrbit> {
    let o = ord_of_lift(f, g);
    if o != 0 {
        return Err(Error::NotNormalized(o));
    }
    let (an, b) = normalize_point_at(a, g);
    let point_ord = -ord_at(&b, g).expect("nonzero");
    let mut p = policy.start.max(1);
    loop {
        let start = (expand(&an.z, g, p as i64), expand(&an.w, g, p as i64));
        match run(f, start, g, n, p, point_ord, bit_budget) {
            Some((orbit, Stop::Complete | Stop::Budget)) => return Ok(orbit),
            _ if p >= policy.cap => return Err(Error::PrecisionExhausted(p)),
            _ => p = (2 * p).min(policy.cap),
        }
    }
}
