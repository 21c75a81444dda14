//! Built-in example pairs and itinerary-driven Julia points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::exact::{ln_rat, Interval, LaurentJet, LogValue, PlaceK, PolyQ, Rat, RationalFunction};
use crate::geometric::{
    escape_from_sigma, partial_series, periodic_series, Certification, EscapeRateResult,
    EscapeValue,
};
use crate::lift::{
    iterate_jet_prefix, BinaryForm, HomogeneousLift, LiftK, Mat2, PointK, ProjPoint,
};
use crate::{Error, Result};

const BITS: u64 = 160;

fn rf(c: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(PolyQ::from_ints(c))
}

fn lift(p: &[&[i64]], q: &[&[i64]]) -> LiftK {
    HomogeneousLift::new(
        BinaryForm::new(p.iter().map(|c| rf(c)).collect()),
        BinaryForm::new(q.iter().map(|c| rf(c)).collect()),
    )
    .expect("nonzero forms")
}

/// `f(z) = z(z+1)/(z+t)` with `F = (z(z+w), (z+tw)w)` and `A = (1, 1)`.
pub fn example_quasi_adelic() -> (LiftK, PointK) {
    (
        lift(&[&[1], &[1], &[]], &[&[], &[1], &[0, 1]]),
        ProjPoint {
            z: rf(&[1]),
            w: rf(&[1]),
        },
    )
}

/// The quadratic map whose Julia set at `t = 0` is a Cantor set in the disks
/// around `±1`.
pub fn example_cantor_julia() -> LiftK {
    lift(
        &[&[1, 1, 1], &[0, 1], &[-1, 0, 1]],
        &[&[], &[0, 1, 2], &[0, 1]],
    )
}

/// The map reducing to the identity at `t = 0` with a hole at `z = 1`.
pub fn example_divergent_alpha() -> LiftK {
    lift(
        &[&[1], &[-1, -1, 1], &[0, 1, -2, -1]],
        &[&[], &[1], &[-1, 0, -1]],
    )
}

/// `F'' = ((X - Y)(X + tY), Y(X - tY))`, with `B⁻¹ F B = t·F''` for
/// `B = [[t, 1], [0, 1]]`, so that `z = tX + Y`, `w = Y`.
pub fn divergent_alpha_conjugate() -> (LiftK, Mat2<RationalFunction>) {
    let f2 = lift(&[&[1], &[-1, 1], &[0, -1]], &[&[], &[1], &[0, -1]]);
    (f2, Mat2::new(rf(&[0, 1]), rf(&[1]), rf(&[]), rf(&[1])))
}

/// `f(z) = z(z-1)/(z-t)`: a point fails to be hole-avoiding at `t = 0` iff it
/// reduces to a nonnegative integer.
pub fn example_translation() -> LiftK {
    lift(&[&[1], &[-1], &[]], &[&[], &[1], &[0, -1]])
}

/// `f(z) = z² + 1/t`: nothing is hole-avoiding at `t = 0`.
pub fn example_no_hole_avoiding() -> LiftK {
    lift(&[&[0, 1], &[], &[1]], &[&[], &[], &[0, 1]])
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub f: LiftK,
    /// Default point.
    pub a: PointK,
    pub summary: &'static str,
}

pub const EXAMPLE_NAMES: [&str; 5] = [
    "quasi-adelic",
    "cantor-julia",
    "divergent-alpha",
    "translation",
    "no-hole-avoiding",
];

pub fn named_example(name: &str) -> Result<Example> {
    let one = ProjPoint {
        z: rf(&[1]),
        w: rf(&[1]),
    };
    let ex = match name {
        "quasi-adelic" => {
            let (f, a) = example_quasi_adelic();
            Example {
                name: "quasi-adelic",
                f,
                a,
                summary: "z(z+1)/(z+t), a = 1",
            }
        }
        "cantor-julia" => Example {
            name: "cantor-julia",
            f: example_cantor_julia(),
            a: one,
            summary: "((t^2+t+1)z^2+tz+t^2-1)/((2t^2+t)z+t), a = 1",
        },
        "divergent-alpha" => Example {
            name: "divergent-alpha",
            f: example_divergent_alpha(),
            a: one,
            summary: "(z^2+(t^2-t-1)z-t^3-2t^2+t)/(z-t^2-1), a = 1",
        },
        "translation" => Example {
            name: "translation",
            f: example_translation(),
            a: ProjPoint {
                z: rf(&[-1, 1]),
                w: rf(&[1]),
            },
            summary: "z(z-1)/(z-t), a = t - 1",
        },
        "no-hole-avoiding" => Example {
            name: "no-hole-avoiding",
            f: example_no_hole_avoiding(),
            a: ProjPoint {
                z: rf(&[]),
                w: rf(&[1]),
            },
            summary: "z^2 + 1/t, a = 0",
        },
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown example {other:?}; known: {}",
                EXAMPLE_NAMES.join(", ")
            )))
        }
    };
    Ok(ex)
}

// ---------------------------------------------------------------------------
// Itineraries for the Cantor example.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Plus,
    Minus,
}

impl Symbol {
    pub fn sigma(self) -> i64 {
        match self {
            Symbol::Plus => 1,
            Symbol::Minus => 2,
        }
    }

    fn residue(self) -> Rat {
        match self {
            Symbol::Plus => Rat::one(),
            Symbol::Minus => -Rat::one(),
        }
    }

    fn gain(self) -> usize {
        self.sigma() as usize
    }
}

/// A finite prefix optionally followed by a pattern repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    pub prefix: Vec<Symbol>,
    pub tail: Option<Vec<Symbol>>,
}

impl Itinerary {
    pub fn periodic(prefix: Vec<Symbol>, pattern: Vec<Symbol>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidInput("empty periodic pattern".into()));
        }
        Ok(Itinerary {
            prefix,
            tail: Some(pattern),
        })
    }

    pub fn finite(prefix: Vec<Symbol>) -> Self {
        Itinerary { prefix, tail: None }
    }

    /// Number of known symbols (`None` when infinite).
    pub fn len(&self) -> Option<usize> {
        self.tail.is_none().then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn get(&self, n: usize) -> Option<Symbol> {
        if n < self.prefix.len() {
            return Some(self.prefix[n]);
        }
        self.tail
            .as_ref()
            .map(|t| t[(n - self.prefix.len()) % t.len()])
    }

    /// Up to `n` leading symbols.
    pub fn take(&self, n: usize) -> Vec<Symbol> {
        (0..n).map_while(|i| self.get(i)).collect()
    }

    /// Replaces the symbol at position `n`, unrolling the tail if needed.
    pub fn with_symbol(&self, n: usize, s: Symbol) -> Self {
        let mut it = self.clone();
        if n >= it.prefix.len() {
            if let Some(t) = &self.tail {
                // Unroll whole periods so the tail stays aligned.
                while it.prefix.len() <= n {
                    it.prefix.extend(t.iter().copied());
                }
            }
        }
        if n < it.prefix.len() {
            it.prefix[n] = s;
        }
        it
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |s: &Symbol| if *s == Symbol::Plus { '+' } else { '-' };
        let p: String = self.prefix.iter().map(sym).collect();
        write!(f, "{p}")?;
        if let Some(t) = &self.tail {
            let t: String = t.iter().map(sym).collect();
            write!(f, "({t})*")?;
        }
        Ok(())
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    /// `"+-+"`, `"+(+-)*"` or `"(+)*"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad itinerary {s:?}"));
        let symbols = |x: &str| -> Result<Vec<Symbol>> {
            x.chars()
                .map(|c| match c {
                    '+' => Ok(Symbol::Plus),
                    '-' => Ok(Symbol::Minus),
                    _ => Err(bad()),
                })
                .collect()
        };
        match s.find('(') {
            None => Ok(Itinerary::finite(symbols(s)?)),
            Some(i) => {
                let rest = s[i + 1..].strip_suffix(")*").ok_or_else(bad)?;
                let pattern = symbols(rest)?;
                if pattern.is_empty() {
                    return Err(bad());
                }
                Itinerary::periodic(symbols(&s[..i])?, pattern)
            }
        }
    }
}

/// Comma-separated positive integers, e.g. `"2,50,2500"`.
pub fn parse_m_sequence(s: &str) -> Result<Vec<u64>> {
    let m: Vec<u64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {x:?} in {s:?}")))
        })
        .collect::<Result<_>>()?;
    if m.is_empty() || m.contains(&0) {
        return Err(Error::Parse(format!("need positive integers, got {s:?}")));
    }
    Ok(m)
}

/// `G_{F,0}(A) = -Σ σ_(n-1)/2^n` for the Cantor example, with `σ` read off
/// the itinerary. Exact for eventually periodic itineraries; otherwise an
/// enclosure from the first `min(n, len)` symbols using `σ ∈ {1, 2}`.
pub fn itinerary_escape_rate(it: &Itinerary, n: usize) -> EscapeRateResult {
    let gamma = PlaceK::zero();
    match &it.tail {
        Some(t) => {
            let s = it.prefix.len();
            let sig: Vec<i64> = it
                .take(s + t.len())
                .into_iter()
                .map(Symbol::sigma)
                .collect();
            let value = -periodic_series(&sig, 2, s, t.len());
            EscapeRateResult {
                value: EscapeValue::Exact(value),
                certification: Certification::ExactByItinerary {
                    preperiod: s,
                    period: t.len(),
                },
                sigma_prefix: it.take(n).into_iter().map(Symbol::sigma).collect(),
                gamma,
            }
        }
        None => {
            let sig: Vec<i64> = it.take(n).into_iter().map(Symbol::sigma).collect();
            let k = sig.len();
            let partial = -partial_series(&sig, 2);
            let scale = Rat::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), k));
            EscapeRateResult {
                value: EscapeValue::Interval(
                    &partial - &scale * Rat::from_integer(2.into()),
                    partial - scale,
                ),
                certification: Certification::RigorousInterval,
                sigma_prefix: sig,
                gamma,
            }
        }
    }
}

/// Same enclosure as [`itinerary_escape_rate`] but from an explicit σ
/// prefix with the generic tail bound `0 ≤ σ ≤ q`.
pub fn cantor_interval_from_sigma(sigma: Vec<i64>, q: i64) -> EscapeRateResult {
    escape_from_sigma(sigma, 2, q, &Rat::zero(), None, PlaceK::zero())
}

// ---------------------------------------------------------------------------
// Truncated power series in t and inverse branches.

/// `Σ c_k t^k mod t^p`.
type Series = Vec<Rat>;

fn s_trunc(mut a: Series, p: usize) -> Series {
    a.resize(p, Rat::zero());
    a
}

fn s_add(a: &Series, b: &Series, p: usize) -> Series {
    (0..p)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rat::zero)
                + b.get(i).cloned().unwrap_or_else(Rat::zero)
        })
        .collect()
}

fn s_mul(a: &Series, b: &Series, p: usize) -> Series {
    let mut out = vec![Rat::zero(); p];
    for (i, x) in a.iter().enumerate().take(p) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(p - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn s_inv(a: &Series, p: usize) -> Option<Series> {
    let a0 = a.first().filter(|x| !x.is_zero())?.recip();
    let mut out = vec![Rat::zero(); p];
    for k in 0..p {
        let mut s = if k == 0 { Rat::one() } else { Rat::zero() };
        for i in 1..=k {
            if let Some(ai) = a.get(i) {
                s -= ai * &out[k - i];
            }
        }
        out[k] = s * &a0;
    }
    Some(out)
}

fn poly_series(c: &RationalFunction, p: usize) -> Series {
    assert!(c.den().is_one(), "polynomial coefficients expected");
    s_trunc(c.num().coeffs().to_vec(), p)
}

/// Root near `r` of `P(y, 1) - x·Q(y, 1)`, for `F` with polynomial
/// coefficients, all series taken mod `t^p`.
fn inverse_branch(f: &LiftK, x: &Series, r: &Rat, p: usize) -> Result<Series> {
    let d = f.degree();
    // Coefficient of y^(d-i).
    let coeffs: Vec<Series> = (0..=d)
        .map(|i| {
            let pi = poly_series(&f.p.coeffs[i], p);
            let qi = poly_series(&f.q.coeffs[i], p);
            let xq = s_mul(x, &qi, p);
            pi.iter().zip(&xq).map(|(a, b)| a - b).collect()
        })
        .collect();
    let eval = |y: &Series| -> (Series, Series) {
        // Horner for G and G'.
        let mut g = vec![Rat::zero(); p];
        let mut dg = vec![Rat::zero(); p];
        for c in &coeffs {
            dg = s_add(&s_mul(&dg, y, p), &g, p);
            g = s_add(&s_mul(&g, y, p), c, p);
        }
        (g, dg)
    };
    let mut y = s_trunc(vec![r.clone()], p);
    let (g0, dg0) = eval(&y);
    if !g0[0].is_zero() {
        return Err(Error::InconsistentItinerary(format!(
            "{r} is not a preimage residue"
        )));
    }
    if dg0[0].is_zero() {
        return Err(Error::InconsistentItinerary(format!(
            "preimage residue {r} is not simple"
        )));
    }
    let mut good = 1;
    while good < p {
        let (g, dg) = eval(&y);
        let step = s_mul(&g, &s_inv(&dg, p).expect("unit derivative"), p);
        y = y.iter().zip(&step).map(|(a, b)| a - b).collect();
        good *= 2;
    }
    Ok(y)
}

fn to_jet(s: &Series, certified: usize) -> LaurentJet {
    LaurentJet::from_series(
        PlaceK::zero(),
        0,
        s[..certified.min(s.len())].to_vec(),
        certified as i64,
    )
}

/// Backward construction through inverse branches: `residues[n]` is the
/// residue of the `n`-th iterate, `gains[n]` the order by which the branch
/// from step `n + 1` back to step `n` contracts.
fn backward_orbit(f: &LiftK, residues: &[Rat], gains: &[usize]) -> Result<(Series, usize)> {
    let steps = residues.len() - 1;
    let certified = 1 + gains[..steps].iter().sum::<usize>();
    let p = certified + 2;
    let mut x = s_trunc(vec![residues[steps].clone()], p);
    for n in (0..steps).rev() {
        x = inverse_branch(f, &x, &residues[n], p)?;
    }
    Ok((x, certified))
}

/// A jet `a ∈ Q[[t]]` in the Cantor Julia set following the first `steps`
/// symbols of `it`; its precision supports `steps` jet iterations.
pub fn build_cantor_julia_point(it: &Itinerary, steps: usize) -> Result<LaurentJet> {
    let syms = it.take(steps + 1);
    if syms.is_empty() {
        return Err(Error::InvalidInput("empty itinerary".into()));
    }
    let residues: Vec<Rat> = syms.iter().map(|s| s.residue()).collect();
    let gains: Vec<usize> = syms.iter().map(|s| s.gain()).collect();
    let (x, certified) = backward_orbit(&example_cantor_julia(), &residues, &gains)?;
    Ok(to_jet(&x, certified))
}

/// Residues `X_n(0)` of the conjugated orbit for a sequence `m`:
/// `m0, m0-1, ..., 0, m1, ..., 0, m2, ...`.
fn divergent_residues(m: &[u64], len: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for &mk in m {
        for r in (0..=mk).rev() {
            if out.len() == len {
                return out;
            }
            out.push(r);
        }
    }
    out
}

/// Jet `X0` with `a = 1 + t·X0`, following the residues for `steps` steps
/// of the conjugated map.
fn build_divergent_x0(m: &[u64], steps: usize) -> Result<(Series, usize)> {
    let res = divergent_residues(m, steps + 1);
    if res.len() < steps + 1 {
        return Err(Error::InvalidInput(format!(
            "sequence m supports only {} steps",
            res.len().saturating_sub(1)
        )));
    }
    let residues: Vec<Rat> = res.iter().map(|&r| Rat::from_integer(r.into())).collect();
    let gains: Vec<usize> = res.iter().map(|&r| usize::from(r == 0)).collect();
    backward_orbit(&divergent_alpha_conjugate().0, &residues, &gains)
}

/// The point `a = 1 + m0·t + …` of the divergent example following `m`.
pub fn build_divergent_julia_point(m: &[u64], steps: usize) -> Result<LaurentJet> {
    let (x0, certified) = build_divergent_x0(m, steps)?;
    let mut a = vec![Rat::one()];
    a.extend(x0.into_iter().take(certified));
    Ok(to_jet(&a, certified + 1))
}

/// α_n for the divergent example, by closed form and by jet iteration.
#[derive(Clone, Debug)]
pub struct DivergentAlpha {
    pub m: Vec<u64>,
    /// `s_1, s_2, …`: `(A_n)_0 = s_n·(A_(n-1))_0^2` up to the common coordinate.
    pub scalars: Vec<Rat>,
    pub closed_form: Vec<LogValue>,
    /// Present when the jet route was run; `None` entries past its certified prefix.
    pub jet: Option<Vec<LogValue>>,
    pub jet_scalars: Option<Vec<Rat>>,
}

impl DivergentAlpha {
    /// Largest distance between the two routes' enclosures (0 when they overlap).
    pub fn routes_agree(&self) -> bool {
        match &self.jet {
            None => true,
            Some(j) => j
                .iter()
                .zip(&self.closed_form)
                .all(|(a, b)| a.to_interval(BITS).intersects(&b.to_interval(BITS))),
        }
    }
}

/// Jet route limit: beyond this many steps only the closed form is evaluated.
pub const JET_ROUTE_LIMIT: usize = 4096;

fn alpha_from_scalars(s: &[Rat]) -> Vec<LogValue> {
    let mut cache: BTreeMap<Rat, Interval> = BTreeMap::new();
    let mut acc = Interval::zero();
    let mut w = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    s.iter()
        .map(|x| {
            w *= &half;
            let ax = x.abs();
            if !ax.is_one() {
                let l = cache
                    .entry(ax.clone())
                    .or_insert_with(|| ln_rat(&ax, BITS))
                    .clone();
                acc = acc.add(&l.mul_rat(&w, BITS)).rounded(BITS);
            }
            LogValue::Archimedean(acc.clone())
        })
        .collect()
}

pub fn divergent_alpha_sequence(m: &[u64], n: usize) -> Result<DivergentAlpha> {
    if m.is_empty() || m.contains(&0) {
        return Err(Error::InvalidInput(
            "m must be a nonempty list of positive integers".into(),
        ));
    }
    let total: u64 = m.iter().sum::<u64>() + m.len() as u64 - 1;
    let len = (n as u64).min(total) as usize;
    // Closed form: s = m0, m0-1, ..., 1, -2/(m1+1), m1, ..., 1, -2/(m2+1), ...
    let mut scalars = Vec::with_capacity(len);
    'outer: for (k, &mk) in m.iter().enumerate() {
        if k > 0 {
            if scalars.len() == len {
                break;
            }
            scalars.push(Rat::new((-2).into(), (mk + 1).into()));
        }
        for r in (1..=mk).rev() {
            if scalars.len() == len {
                break 'outer;
            }
            scalars.push(Rat::from_integer(r.into()));
        }
    }
    let closed_form = alpha_from_scalars(&scalars);
    let (jet, jet_scalars) = if len <= JET_ROUTE_LIMIT {
        let js = jet_route_scalars(m, len)?;
        (Some(alpha_from_scalars(&js)), Some(js))
    } else {
        (None, None)
    };
    Ok(DivergentAlpha {
        m: m.to_vec(),
        scalars,
        closed_form,
        jet,
        jet_scalars,
    })
}

/// Unit scalars `s_i(0)` from jet iteration of the conjugated map started at
/// the constructed point `(X0, 1)`.
fn jet_route_scalars(m: &[u64], len: usize) -> Result<Vec<Rat>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    let (x0, certified) = build_divergent_x0(m, len)?;
    let g = PlaceK::zero();
    let x = to_jet(&x0, certified);
    let y = LaurentJet::constant(g.clone(), Rat::one(), certified);
    let orbit = iterate_jet_prefix(&divergent_alpha_conjugate().0, &x, &y, &g, len)?;
    if orbit.sigma.len() < len {
        return Err(Error::PrecisionExhausted(certified));
    }
    Ok(orbit.scalars[1..].to_vec())
}

// ---------------------------------------------------------------------------
// End-to-end reproductions.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

fn check(
    label: impl Into<String>,
    expected: impl fmt::Display,
    got: impl fmt::Display,
    pass: bool,
) -> Check {
    Check {
        label: label.into(),
        expected: expected.to_string(),
        got: got.to_string(),
        pass,
    }
}

/// Runs a named example end to end against its known values.
pub fn reproduce(name: &str, m: Option<&[u64]>) -> Result<Vec<Check>> {
    use crate::geometric::{divisor_of, EscapeOptions};
    use crate::lift::{hole_factorization, singular_sets, specialize_lift};
    let opts = EscapeOptions::default();
    let mut out = Vec::new();
    match name {
        "quasi-adelic" => {
            let (f, a) = example_quasi_adelic();
            let ss = singular_sets(&f, &a)?;
            let places: Vec<String> = ss.s_fa.iter().map(|g| g.to_string()).collect();
            out.push(check(
                "singular set",
                "0,1,inf",
                places.join(","),
                places == ["0", "1", "inf"],
            ));
            let res = f.resultant();
            out.push(check("resultant", "t^2 - t", &res, res == rf(&[0, -1, 1])));
            let hf = hole_factorization(&specialize_lift(&f, &PlaceK::zero())?);
            let holes: Vec<String> = hf
                .holes
                .iter()
                .map(|h| format!("({}:{})", h.z, h.w))
                .collect();
            out.push(check(
                "holes at t=0",
                "(0:1)",
                holes.join(","),
                holes == ["(0:1)"],
            ));
            let div = divisor_of(&f, &a, &opts)?;
            let entries: Vec<String> = div
                .entries
                .iter()
                .map(|(g, v)| format!("{g}:{v}"))
                .collect();
            out.push(check(
                "divisor",
                "inf:1",
                entries.join(","),
                entries == ["inf:1"],
            ));
            let all_exact = div
                .results
                .values()
                .all(|r| r.certification == Certification::ExactByHoleAvoidance);
            out.push(check(
                "certification",
                "ExactByHoleAvoidance at 0,1,inf",
                all_exact,
                all_exact,
            ));
            out.push(check(
                "height",
                "1",
                &div.degree,
                div.degree == EscapeValue::Exact(Rat::one()),
            ));
        }
        "cantor-julia" => {
            for (s, want) in [
                ("(+)*", Rat::from_integer((-1).into())),
                ("(+-)*", Rat::new((-4).into(), 3.into())),
            ] {
                let it: Itinerary = s.parse()?;
                let r = itinerary_escape_rate(&it, 30);
                out.push(check(
                    format!("G for {s}"),
                    &want,
                    &r.value,
                    r.value == EscapeValue::Exact(want.clone()),
                ));
            }
            let f = example_cantor_julia();
            let orbit = crate::lift::iterate_jet(
                &f,
                &crate::lift::JetStart::Exact(ProjPoint {
                    z: rf(&[1]),
                    w: rf(&[1]),
                }),
                &PlaceK::zero(),
                30,
                opts.policy,
            )?;
            let ok = orbit.sigma.iter().all(|&s| s == 1);
            out.push(check(
                "sigma at a = 1 (30 steps)",
                "all 1",
                format!("{:?}", &orbit.sigma[..5]),
                ok,
            ));
        }
        "divergent-alpha" => {
            let m = m.unwrap_or(&[2, 50]);
            let n = (m.iter().sum::<u64>() + m.len() as u64 - 1).min(64) as usize;
            let da = divergent_alpha_sequence(m, n)?;
            let scal_ok = da
                .jet_scalars
                .as_ref()
                .map(|j| j == &da.scalars)
                .unwrap_or(true);
            out.push(check(
                "jet scalars equal closed-form scalars",
                "equal",
                scal_ok,
                scal_ok,
            ));
            out.push(check(
                "routes agree",
                "overlap",
                da.routes_agree(),
                da.routes_agree(),
            ));
            for (i, (c, j)) in da
                .closed_form
                .iter()
                .zip(da.jet.iter().flatten())
                .enumerate()
                .take(6)
            {
                out.push(check(
                    format!("alpha_{}", i + 1),
                    c,
                    j,
                    c.to_interval(BITS).intersects(&j.to_interval(BITS)),
                ));
            }
            let a0 = build_divergent_julia_point(m, 1)?;
            let lead = (a0.coeff(0), a0.coeff(1));
            let want = (Some(Rat::one()), Some(Rat::from_integer(m[0].into())));
            out.push(check(
                "a = 1 + m0 t + O(t^2)",
                format!("1 + {} t", m[0]),
                &a0,
                lead == want,
            ));
        }
        "translation" => {
            use crate::fatou::check_hole_avoiding;
            let f = example_translation();
            for a0 in -3..=6i64 {
                let a = ProjPoint {
                    z: rf(&[a0, 1]),
                    w: rf(&[1]),
                };
                let v = check_hole_avoiding(&f, &a, &PlaceK::zero(), 200)?;
                let want_fail = a0 >= 0;
                out.push(check(
                    format!("a0 = {a0}"),
                    if want_fail {
                        "not hole-avoiding"
                    } else {
                        "hole-avoiding"
                    },
                    format!("{v:?}"),
                    v.is_hole_avoiding() != want_fail,
                ));
            }
        }
        "no-hole-avoiding" => {
            use crate::fatou::{check_hole_avoiding, HoleAvoidanceVerdict};
            let f = example_no_hole_avoiding();
            for a0 in [-2i64, -1, 0, 1, 2, 3, 7] {
                let a = ProjPoint {
                    z: rf(&[a0, 1]),
                    w: rf(&[1]),
                };
                let v = check_hole_avoiding(&f, &a, &PlaceK::zero(), 200)?;
                let ok =
                    matches!(v, HoleAvoidanceVerdict::NotHoleAvoiding { hit_at } if hit_at <= 2);
                out.push(check(
                    format!("a = {a0} + t"),
                    "hit_at <= 2",
                    format!("{v:?}"),
                    ok,
                ));
            }
        }
        other => return Err(Error::InvalidInput(format!("unknown example {other:?}"))),
    }
    Ok(out)
}
