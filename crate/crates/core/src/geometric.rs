//! Geometric escape rates `G_{F,γ}(A)`, local canonical heights at places of
//! `Q(t)` and the divisor `D(F, A)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{ord_at, PlaceK, Rat};
use crate::fatou::check_hole_avoiding;
use crate::lift::{
    iterate_jet, iterate_jet_bounded, normalize_at, normalize_point_at, ord_of_lift, ord_of_point,
    singular_sets, JetStart, LiftK, PointK, PrecisionPolicy, JET_BIT_BUDGET,
};
use crate::{Error, Result};

/// An exact rational or a closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EscapeValue {
    Exact(Rat),
    Interval(Rat, Rat),
}

impl EscapeValue {
    pub fn lo(&self) -> &Rat {
        match self {
            EscapeValue::Exact(r) => r,
            EscapeValue::Interval(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            EscapeValue::Exact(r) => r,
            EscapeValue::Interval(_, hi) => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            EscapeValue::Exact(r) => Some(r),
            EscapeValue::Interval(..) => None,
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn width(&self) -> Rat {
        self.hi() - self.lo()
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (EscapeValue::Exact(a), EscapeValue::Exact(b)) => EscapeValue::Exact(a + b),
            _ => EscapeValue::Interval(self.lo() + o.lo(), self.hi() + o.hi()),
        }
    }

    pub fn shift(&self, r: &Rat) -> Self {
        match self {
            EscapeValue::Exact(a) => EscapeValue::Exact(a + r),
            EscapeValue::Interval(lo, hi) => EscapeValue::Interval(lo + r, hi + r),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        match self {
            EscapeValue::Exact(a) => EscapeValue::Exact(a * r),
            EscapeValue::Interval(lo, hi) => {
                let (x, y) = (lo * r, hi * r);
                if r.is_negative() {
                    EscapeValue::Interval(y, x)
                } else {
                    EscapeValue::Interval(x, y)
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EscapeValue::Exact(r) if r.is_zero())
    }
}

impl fmt::Display for EscapeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EscapeValue::Exact(r) => write!(f, "{r}"),
            EscapeValue::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// The normalized pair is hole-avoiding, so every σ vanishes.
    ExactByHoleAvoidance,
    /// The computed σ-prefix ends in `repetitions_observed` full copies of a
    /// period; the value assumes the period continues forever. Not a proof.
    ExactByDetectedPeriod {
        preperiod: usize,
        period: usize,
        repetitions_observed: usize,
    },
    /// σ is read off an eventually periodic itinerary, so the series is summed exactly.
    ExactByItinerary { preperiod: usize, period: usize },
    /// Partial sum with the tail enclosed using `0 ≤ σ ≤ q`.
    RigorousInterval,
}

impl Certification {
    pub fn name(&self) -> &'static str {
        match self {
            Certification::ExactByHoleAvoidance => "ExactByHoleAvoidance",
            Certification::ExactByDetectedPeriod { .. } => "ExactByDetectedPeriod",
            Certification::ExactByItinerary { .. } => "ExactByItinerary",
            Certification::RigorousInterval => "RigorousInterval",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeRateResult {
    pub value: EscapeValue,
    pub certification: Certification,
    pub sigma_prefix: Vec<i64>,
    pub gamma: PlaceK,
}

#[derive(Clone, Copy, Debug)]
pub struct EscapeOptions {
    /// σ depth, and iteration cap of the hole-avoidance check.
    pub max_iter: usize,
    /// Full repetitions required before a period is accepted.
    pub repetitions: usize,
    pub policy: PrecisionPolicy,
    /// Skip the hole-avoidance shortcut and period detection.
    pub interval_only: bool,
    /// Size cap on jet coefficients; past it the σ-prefix stops early.
    pub bit_budget: u64,
}

impl Default for EscapeOptions {
    fn default() -> Self {
        EscapeOptions {
            max_iter: 200,
            repetitions: 3,
            policy: PrecisionPolicy::default(),
            interval_only: false,
            bit_budget: JET_BIT_BUDGET,
        }
    }
}

fn d_pow(d: usize, k: usize) -> Rat {
    Rat::from_integer(num_traits::pow(BigInt::from(d), k))
}

/// σ and τ for lifts normalized at `γ`: `τ_0 = 0`, `τ_n = d·τ_(n-1) + σ_(n-1)`.
pub fn sigma_tau_sequences(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    n: usize,
    policy: PrecisionPolicy,
) -> Result<(Vec<i64>, Vec<BigInt>)> {
    let oa = ord_of_point(a, g);
    if oa != 0 {
        return Err(Error::NotNormalized(oa));
    }
    let orbit = iterate_jet(f, &JetStart::Exact(a.clone()), g, n, policy)?;
    let tau = tau_from_sigma(&orbit.sigma, f.degree(), BigInt::zero());
    Ok((orbit.sigma, tau))
}

pub fn tau_from_sigma(sigma: &[i64], d: usize, tau0: BigInt) -> Vec<BigInt> {
    let mut tau = vec![tau0];
    for s in sigma {
        let next = tau.last().unwrap() * BigInt::from(d) + BigInt::from(*s);
        tau.push(next);
    }
    tau
}

/// Smallest period `p ≤ len/R`, with its least preperiod, such that the tail
/// from the preperiod holds at least `R` full periods.
pub fn detect_period(sigma: &[i64], repetitions: usize) -> Option<(usize, usize)> {
    let n = sigma.len();
    let r = repetitions.max(1);
    for p in 1..=n / r {
        // Least s with sigma[i] = sigma[i + p] for all i in s..n-p.
        let mut s = n - p;
        while s > 0 && sigma[s - 1] == sigma[s - 1 + p] {
            s -= 1;
        }
        if n - s >= r * p {
            return Some((s, p));
        }
    }
    None
}

/// `Σ_{k≥0} σ_k / d^(k+1)` for `σ` with preperiod `s` and period `p`.
pub fn periodic_series(sigma: &[i64], d: usize, s: usize, p: usize) -> Rat {
    let head: Rat = (0..s)
        .map(|k| Rat::from_integer(sigma[k].into()) / d_pow(d, k + 1))
        .sum();
    let block: Rat = (0..p)
        .map(|j| Rat::from_integer(sigma[s + j].into()) / d_pow(d, j + 1))
        .sum();
    let geo = Rat::one() / (Rat::one() - Rat::one() / d_pow(d, p));
    head + block * geo / d_pow(d, s)
}

/// Partial sum `Σ_{k<N} σ_k/d^(k+1)`.
pub fn partial_series(sigma: &[i64], d: usize) -> Rat {
    sigma
        .iter()
        .enumerate()
        .map(|(k, s)| Rat::from_integer((*s).into()) / d_pow(d, k + 1))
        .sum()
}

/// Escape rate of a normalized pair from its σ-prefix, shifted by `shift`.
/// `q` bounds every σ.
pub fn escape_from_sigma(
    sigma: Vec<i64>,
    d: usize,
    q: i64,
    shift: &Rat,
    repetitions: Option<usize>,
    gamma: PlaceK,
) -> EscapeRateResult {
    if let Some(r) = repetitions {
        if let Some((s, p)) = detect_period(&sigma, r) {
            let v = -periodic_series(&sigma, d, s, p) + shift;
            let reps = (sigma.len() - s) / p;
            return EscapeRateResult {
                value: EscapeValue::Exact(v),
                certification: Certification::ExactByDetectedPeriod {
                    preperiod: s,
                    period: p,
                    repetitions_observed: reps,
                },
                sigma_prefix: sigma,
                gamma,
            };
        }
    }
    let n = sigma.len();
    let partial = -partial_series(&sigma, d) + shift;
    let tail =
        Rat::from_integer(q.into()) / (d_pow(d, n) * Rat::from_integer((d as i64 - 1).into()));
    EscapeRateResult {
        value: EscapeValue::Interval(&partial - tail, partial),
        certification: Certification::RigorousInterval,
        sigma_prefix: sigma,
        gamma,
    }
}

/// `ord_γ(c)/(d-1) + ord_γ(b)` for the normalizing scalars of `F` and `A`:
/// `G_F(A) = G_{cF}(bA) + shift`.
pub fn normalization_shift(f: &LiftK, a: &PointK, g: &PlaceK) -> Rat {
    let d = f.degree() as i64;
    let oc = -ord_of_lift(f, g);
    let ob = -ord_of_point(a, g);
    Rat::new(oc.into(), (d - 1).into()) + Rat::from_integer(ob.into())
}

/// `G_{F,γ}(A)`, for any lifts.
pub fn geometric_escape_rate(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    opts: &EscapeOptions,
) -> Result<EscapeRateResult> {
    let d = f.degree();
    let (fn_, _) = normalize_at(f, g);
    let (an, _) = normalize_point_at(a, g);
    let shift = normalization_shift(f, a, g);
    if !opts.interval_only {
        let verdict = check_hole_avoiding(&fn_, &an, g, opts.max_iter)?;
        if verdict.is_hole_avoiding() {
            return Ok(EscapeRateResult {
                value: EscapeValue::Exact(shift),
                certification: Certification::ExactByHoleAvoidance,
                sigma_prefix: Vec::new(),
                gamma: g.clone(),
            });
        }
    }
    let orbit = iterate_jet_bounded(&fn_, &an, g, opts.max_iter, opts.policy, opts.bit_budget)?;
    let q = ord_at(&fn_.resultant(), g)?;
    let reps = (!opts.interval_only).then_some(opts.repetitions);
    Ok(escape_from_sigma(
        orbit.sigma,
        d,
        q,
        &shift,
        reps,
        g.clone(),
    ))
}

/// `λ_γ(a) = -min(0, ord_γ a) - Σ σ_n/d^(n+1)` with `σ` taken from lifts
/// normalized at `γ`; `a = z/w` must be finite.
pub fn local_canonical_height(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    opts: &EscapeOptions,
) -> Result<EscapeRateResult> {
    let Some(x) = a.ratio() else {
        return Err(Error::InvalidInput(
            "local height needs a finite point".into(),
        ));
    };
    let base = if x.is_zero() {
        0
    } else {
        ord_at(&x, g)?.min(0)
    };
    let (fn_, _) = normalize_at(f, g);
    let mut r = geometric_escape_rate(&fn_, a, g, opts)?;
    // `r` includes the shift for `A`; keep only the normalized part.
    let shift_a = Rat::from_integer((-ord_of_point(a, g)).into());
    r.value = r
        .value
        .shift(&(-shift_a + Rat::from_integer((-base).into())));
    Ok(r)
}

/// `D(F, A) = Σ_γ G_{F,γ}(A)·(γ)` over the singular set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorQ {
    /// Nonzero coefficients.
    pub entries: BTreeMap<PlaceK, EscapeValue>,
    /// Escape rate results at every place of `S(F, A)`.
    pub results: BTreeMap<PlaceK, EscapeRateResult>,
    pub degree: EscapeValue,
}

impl DivisorQ {
    pub fn zero() -> Self {
        DivisorQ {
            entries: BTreeMap::new(),
            results: BTreeMap::new(),
            degree: EscapeValue::Exact(Rat::zero()),
        }
    }

    pub fn from_entries(entries: BTreeMap<PlaceK, EscapeValue>) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let degree = entries
            .values()
            .fold(EscapeValue::Exact(Rat::zero()), |acc, v| acc.add(v));
        DivisorQ {
            entries,
            results: BTreeMap::new(),
            degree,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|v| v.exact().is_some())
    }

    pub fn coefficient(&self, g: &PlaceK) -> EscapeValue {
        self.entries
            .get(g)
            .cloned()
            .unwrap_or(EscapeValue::Exact(Rat::zero()))
    }
}

pub fn divisor_of(f: &LiftK, a: &PointK, opts: &EscapeOptions) -> Result<DivisorQ> {
    let ss = singular_sets(f, a)?;
    if let Some(p) = ss.irrational_fa {
        return Err(Error::IrrationalPlace(p.to_string()));
    }
    let mut results = BTreeMap::new();
    for g in &ss.s_fa {
        results.insert(g.clone(), geometric_escape_rate(f, a, g, opts)?);
    }
    let entries = results
        .iter()
        .map(|(g, r)| (g.clone(), r.value.clone()))
        .collect();
    let mut div = DivisorQ::from_entries(entries);
    div.results = results;
    Ok(div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, PolyQ, RationalFunction};
    use crate::lift::{BinaryForm, HomogeneousLift, ProjPoint};

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyQ::from_ints(c))
    }

    fn quasi_adelic() -> (LiftK, PointK) {
        let f = HomogeneousLift::new(
            BinaryForm::new(vec![rf(&[1]), rf(&[1]), rf(&[])]),
            BinaryForm::new(vec![rf(&[]), rf(&[1]), rf(&[0, 1])]),
        )
        .unwrap();
        (f, ProjPoint::new(rf(&[1]), rf(&[1])).unwrap())
    }

    #[test]
    fn period_detection() {
        assert_eq!(detect_period(&[1, 1, 1, 1], 3), Some((0, 1)));
        assert_eq!(detect_period(&[2, 1, 2, 1, 2, 1], 3), Some((0, 2)));
        assert_eq!(detect_period(&[0, 1, 2, 1, 2, 1, 2], 3), Some((1, 2)));
        assert_eq!(detect_period(&[1, 2, 3], 3), None);
        assert_eq!(periodic_series(&[1, 2], 2, 0, 2), rat(4, 3));
        assert_eq!(periodic_series(&[1], 2, 0, 1), int(1));
    }

    #[test]
    fn quasi_adelic_divisor() {
        let (f, a) = quasi_adelic();
        let div = divisor_of(&f, &a, &EscapeOptions::default()).unwrap();
        assert_eq!(div.entries.len(), 1);
        assert_eq!(
            div.coefficient(&PlaceK::Infinity),
            EscapeValue::Exact(int(1))
        );
        assert_eq!(div.degree, EscapeValue::Exact(int(1)));
        assert!(div
            .results
            .values()
            .all(|r| r.certification == Certification::ExactByHoleAvoidance));
        assert_eq!(div.results.len(), 3);
    }

    #[test]
    fn interval_encloses_exact() {
        let (f, a) = quasi_adelic();
        let opts = EscapeOptions {
            max_iter: 12,
            interval_only: true,
            ..Default::default()
        };
        let r = geometric_escape_rate(&f, &a, &PlaceK::Infinity, &opts).unwrap();
        assert!(r.value.contains(&int(1)), "{}", r.value);
    }

    #[test]
    fn good_reduction_local_height() {
        // (z^2, w^2) with a = 1/t^2 at 0: λ = 2.
        let f: LiftK = HomogeneousLift::new(
            BinaryForm::new(vec![rf(&[1]), rf(&[]), rf(&[])]),
            BinaryForm::new(vec![rf(&[]), rf(&[]), rf(&[1])]),
        )
        .unwrap();
        let a = ProjPoint::new(rf(&[1]), rf(&[0, 0, 1])).unwrap();
        let r = local_canonical_height(&f, &a, &PlaceK::zero(), &EscapeOptions::default()).unwrap();
        assert_eq!(r.value, EscapeValue::Exact(int(2)));
    }
}
