//! Specialization at rational parameters and certified escape rates at the
//! places of `Q`: canonical heights, Weil heights of divisors on the parameter
//! line, the difference functions `V_v` and the quasiconstants `α_v`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{
    factorize, ln_rat, log_plus_abs, vp_rat, Dyadic, Interval, LogValue, PlaceK, PlaceQ, Rat,
};
use crate::fatou::{check_hole_avoiding, HoleAvoidanceVerdict};
use crate::geometric::{DivisorQ, EscapeValue};
use crate::lift::{
    hole_factorization, normalize_at, normalize_point_at, specialize_lift, specialize_point,
    BinaryForm, LiftK, LiftQ, PointK, PointQ, ProjPoint,
};
use crate::{Error, Result};

/// Working precision for converting exact data to real enclosures.
pub const BITS: u64 = 160;

/// Largest iteration depth tried before giving up on a tolerance.
const MAX_DEPTH: usize = 4096;

/// Size cap (bits) on exact integer iterates in the `α_v` series.
const ALPHA_BIT_BUDGET: u64 = 1 << 18;

fn rat_tol(tol: f64) -> Result<Rat> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(Rat::from_float(tol).expect("finite"))
}

fn d_pow(d: usize, k: usize) -> Rat {
    Rat::from_integer(num_traits::pow(BigInt::from(d), k))
}

fn ratio(a: i64, b: i64) -> Rat {
    Rat::new(a.into(), b.into())
}

/// Integer coefficients of a form with integral rational coefficients.
fn int_coeffs(f: &BinaryForm<Rat>) -> Vec<BigInt> {
    f.coeffs.iter().map(|c| c.to_integer()).collect()
}

fn eval_int(c: &[BigInt], z: &BigInt, w: &BigInt) -> BigInt {
    // Horner in z/w, homogenized.
    let d = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut wp = BigInt::one();
    let mut zp: Vec<BigInt> = Vec::with_capacity(d + 1);
    let mut zz = BigInt::one();
    for _ in 0..=d {
        zp.push(zz.clone());
        zz *= z;
    }
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            acc += ci * &zp[d - i] * &wp;
        }
        wp *= w;
    }
    acc
}

fn eval_interval(c: &[BigInt], z: &Interval, w: &Interval) -> Interval {
    let d = c.len() - 1;
    let mut zp = vec![Interval::from_int(1)];
    let mut wp = vec![Interval::from_int(1)];
    for k in 0..d {
        zp.push(zp[k].mul(z));
        wp.push(wp[k].mul(w));
    }
    let mut acc = Interval::zero();
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            let term = zp[d - i]
                .mul(&wp[i])
                .mul(&Interval::point(Dyadic::from_int(ci.clone())));
            acc = acc.add(&term);
        }
    }
    acc
}

fn l1(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).sum()
}

fn l1_rat(f: &BinaryForm<Rat>) -> Rat {
    f.coeffs.iter().map(|x| x.abs()).sum()
}

/// `(Y, r)` with `a = r·Y` and `Y` a primitive integer vector.
fn primitive_int(a: &PointQ) -> ([BigInt; 2], Rat) {
    let (y, r) = a.primitive();
    ([y.z.to_integer(), y.w.to_integer()], r)
}

fn vp_big(n: &BigInt, p: &BigInt) -> u64 {
    crate::exact::vp_int(n, p)
}

/// Valuation of `x` modulo `p^prec`, or `prec` if `x ≡ 0`.
fn vp_mod(x: &BigInt, p: &BigInt, prec: u64) -> u64 {
    if x.is_zero() {
        return prec;
    }
    vp_big(x, p).min(prec)
}

// ---------------------------------------------------------------------------
// Escape rates of lifts over Q.

/// Coefficient of `log p` for `lim d^(-n) log ‖F^n(Y)‖_p`, with `F` integral
/// with coprime coefficients and `Y` primitive.
fn padic_escape_int(f: &LiftQ, y: &[BigInt; 2], p: &BigInt, tol: &Rat) -> Result<(Rat, Rat)> {
    let d = f.degree();
    let res = f.resultant().to_integer();
    if res.is_zero() {
        return Err(Error::DegenerateMap);
    }
    let q = vp_big(&res, p);
    if q == 0 {
        return Ok((Rat::zero(), Rat::zero()));
    }
    // Real width is (coefficient width)·ln p ≤ (coefficient width)·bits(p).
    let scale =
        Rat::from_integer(BigInt::from(q * p.bits())) / Rat::from_integer(BigInt::from(d - 1));
    let mut n = 1;
    while &scale / d_pow(d, n) > *tol {
        n += 1;
        if n > MAX_DEPTH {
            return Err(Error::ToleranceUnreachable(format!(
                "p-adic depth above {MAX_DEPTH}"
            )));
        }
    }
    let (pc, qc) = (int_coeffs(&f.p), int_coeffs(&f.q));
    let mut prec = q * (n as u64 + 1) + 1;
    let mut modulus = num_traits::pow(p.clone(), prec as usize);
    let mut z = y[0].mod_floor(&modulus);
    let mut w = y[1].mod_floor(&modulus);
    let mut sum = Rat::zero();
    for k in 1..=n {
        let fz = eval_int(&pc, &z, &w).mod_floor(&modulus);
        let fw = eval_int(&qc, &z, &w).mod_floor(&modulus);
        let e = vp_mod(&fz, p, prec).min(vp_mod(&fw, p, prec));
        if e >= prec {
            return Err(Error::PrecisionExhausted(prec as usize));
        }
        let pe = num_traits::pow(p.clone(), e as usize);
        prec -= e;
        modulus = &modulus / &pe;
        z = (fz / &pe).mod_floor(&modulus);
        w = (fw / &pe).mod_floor(&modulus);
        sum += Rat::from_integer(e.into()) / d_pow(d, k);
    }
    let tail =
        Rat::from_integer(q.into()) / (d_pow(d, n) * Rat::from_integer((d as i64 - 1).into()));
    Ok((-(&sum + tail), -sum))
}

/// Tail constants `(c_low, c_up)`: `log ‖F(x)‖ - d log ‖x‖ ∈ [-c_low, c_up]`.
fn archimedean_constants(f: &LiftQ) -> Result<(Interval, Interval)> {
    let ns = f.nullstellensatz()?;
    let m = (l1_rat(&ns.g1) + l1_rat(&ns.g2)).max(l1_rat(&ns.h1) + l1_rat(&ns.h2));
    let c_low = ln_rat(&(m / ns.res.abs()), BITS);
    let c_up = ln_rat(&l1_rat(&f.p).max(l1_rat(&f.q)), BITS);
    Ok((c_low, c_up))
}

/// `lim d^(-n) log ‖F^n(Y)‖_∞` for integral `F` and integer `Y`.
fn archimedean_escape_int(f: &LiftQ, y: &[BigInt; 2], tol: &Rat) -> Result<Interval> {
    let d = f.degree();
    let (c_low, c_up) = archimedean_constants(f)?;
    let (pc, qc) = (int_coeffs(&f.p), int_coeffs(&f.q));
    let log2d = 64 - (d as u64).leading_zeros() as u64;
    let tol_bits = (-tol.to_f64().unwrap_or(1e-300).log2()).max(0.0) as u64;
    let mut n = 16;
    let mut extra_bits = 0;
    loop {
        let bits = 64 + tol_bits + extra_bits + n as u64 * (log2d + 2);
        match archimedean_pass(&pc, &qc, d, y, n, bits, &c_low, &c_up) {
            Some(g) if g.width().to_rat() <= *tol => return Ok(g),
            Some(_) => n *= 2,
            None => extra_bits = 2 * extra_bits + 64,
        }
        if n > MAX_DEPTH || extra_bits > 1 << 14 {
            return Err(Error::ToleranceUnreachable(format!(
                "archimedean enclosure wider than {} after {n} steps",
                tol.to_f64().unwrap_or(0.0)
            )));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn archimedean_pass(
    pc: &[BigInt],
    qc: &[BigInt],
    d: usize,
    y: &[BigInt; 2],
    n: usize,
    bits: u64,
    c_low: &Interval,
    c_up: &Interval,
) -> Option<Interval> {
    let norm = |z: &Interval, w: &Interval| z.abs().max(&w.abs());
    let mut z = Interval::point(Dyadic::from_int(y[0].clone()));
    let mut w = Interval::point(Dyadic::from_int(y[1].clone()));
    // Σ_j e_j / d^j with y_j = F(y_(j-1)) / 2^(e_j).
    let mut esum = Rat::zero();
    for j in 0..=n {
        if j > 0 {
            let (fz, fw) = (eval_interval(pc, &z, &w), eval_interval(qc, &z, &w));
            z = fz;
            w = fw;
        }
        let m = norm(&z, &w);
        if !m.lo().is_positive() {
            return None;
        }
        let e = m.hi().magnitude_exp();
        z = z.ldexp(-e).rounded(bits);
        w = w.ldexp(-e).rounded(bits);
        esum += Rat::from_integer(e.into()) / d_pow(d, j);
    }
    let ln_norm = norm(&z, &w).ln(bits)?;
    let dn = d_pow(d, n);
    let ln2 = ln_rat(&Rat::from_integer(2.into()), bits);
    let mut g = ln2
        .mul_rat(&esum, bits)
        .add(&ln_norm.mul_rat(&(Rat::one() / &dn), bits));
    let tail_scale = Rat::one() / (&dn * Rat::from_integer((d as i64 - 1).into()));
    let lo = c_low.hi().to_rat() * &tail_scale;
    let hi = c_up.hi().to_rat() * &tail_scale;
    let tail = Interval::from_rats(&-lo, &hi, bits);
    g = g.add(&tail).rounded(bits);
    Some(g)
}

/// `G_{F,v}(A) = lim d^(-n) log ‖F^n(A)‖_v` for a lift over `Q` with nonzero
/// resultant, as a certified enclosure of width at most `tol`.
pub fn escape_rate_q(f: &LiftQ, a: &PointQ, v: &PlaceQ, tol: f64) -> Result<LogValue> {
    let tol = rat_tol(tol)?;
    let d = f.degree() as i64;
    let (fi, lambda) = f.to_integral();
    let (y, r) = primitive_int(a);
    // G_f(a) = G_fi(y) - log|λ|/(d-1) + log|r|.
    match v {
        PlaceQ::Prime(p) => {
            let (lo, hi) = padic_escape_int(&fi, &y, p, &tol)?;
            let shift = ratio(vp_rat(&lambda, p), d - 1) - Rat::from_integer(vp_rat(&r, p).into());
            Ok(LogValue::Padic {
                p: p.clone(),
                lo: lo + &shift,
                hi: hi + shift,
            })
        }
        PlaceQ::Archimedean => {
            let g = archimedean_escape_int(&fi, &y, &tol)?;
            let shift = ln_rat(&r.abs(), BITS)
                .sub(&ln_rat(&lambda.abs(), BITS).mul_rat(&ratio(1, d - 1), BITS));
            Ok(LogValue::Archimedean(g.add(&shift).rounded(BITS)))
        }
    }
}

/// `v_p(‖F^k(a)‖)` for `k = 0..=n`, by exact iteration of the vector orbit.
/// The resultant of `F` may vanish; the orbit must stay away from `(0,0)`.
pub fn padic_orbit_valuations(f: &LiftQ, a: &PointQ, p: &BigInt, n: usize) -> Result<Vec<i64>> {
    let d = f.degree() as i64;
    let (mut y, r) = a.primitive();
    let mut e = vp_rat(&r, p);
    let mut out = vec![e];
    for _ in 0..n {
        let (z, w) = f.apply_raw(&y);
        if z.is_zero() && w.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (next, c) = ProjPoint { z, w }.primitive();
        e = d * e + vp_rat(&c, p);
        y = next;
        out.push(e);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Specialization.

#[derive(Clone, Debug)]
pub struct SpecializedPair {
    pub t0: Rat,
    /// `F` and `A` evaluated at `t0`.
    pub f_t: LiftQ,
    pub a_t: PointQ,
    /// Integer lift `λ·F_t` with coprime coefficients.
    pub f_int: LiftQ,
    pub lambda: Rat,
    /// Primitive integer point `μ·A_t`.
    pub a_int: PointQ,
    pub mu: Rat,
    pub bad_places: BTreeSet<PlaceQ>,
}

fn eval_at(x: &crate::exact::RationalFunction, t0: &Rat) -> Result<Rat> {
    x.eval(t0)
        .ok_or_else(|| Error::ExcludedParameter(format!("t = {t0} is a pole of a coefficient")))
}

fn primes_of(x: &Rat) -> impl Iterator<Item = BigInt> {
    let mut ps: BTreeSet<BigInt> = factorize(x.numer()).into_keys().collect();
    ps.extend(factorize(x.denom()).into_keys());
    ps.into_iter()
}

pub fn specialize_pair(f: &LiftK, a: &PointK, t0: &Rat) -> Result<SpecializedPair> {
    let ft = f.map(|c| eval_at(c, t0).unwrap_or_else(|_| Rat::zero()));
    for c in f.coefficients() {
        eval_at(c, t0)?;
    }
    let res = ft.resultant();
    if res.is_zero() {
        return Err(Error::ExcludedParameter(format!(
            "Res(F) vanishes at t = {t0}"
        )));
    }
    let z = eval_at(&a.z, t0)?;
    let w = eval_at(&a.w, t0)?;
    if z.is_zero() && w.is_zero() {
        return Err(Error::ExcludedParameter(format!("A vanishes at t = {t0}")));
    }
    let a_t = ProjPoint { z, w };
    let (f_int, lambda) = ft.to_integral();
    let (a_int, c) = a_t.primitive();
    let mu = Rat::one() / c;
    let mut bad = BTreeSet::from([PlaceQ::Archimedean]);
    for x in [f_int.resultant(), lambda.clone(), mu.clone()] {
        bad.extend(primes_of(&x).map(PlaceQ::Prime));
    }
    Ok(SpecializedPair {
        t0: t0.clone(),
        f_t: ft,
        a_t,
        f_int,
        lambda,
        a_int,
        mu,
        bad_places: bad,
    })
}

/// `G_{F_t,v}(A_t)` for the specializations of the given lifts.
pub fn arithmetic_escape_rate(sp: &SpecializedPair, v: &PlaceQ, tol: f64) -> Result<LogValue> {
    if let PlaceQ::Prime(_) = v {
        if !sp.bad_places.contains(v) {
            return Ok(LogValue::zero(v));
        }
    }
    escape_rate_q(&sp.f_t, &sp.a_t, v, tol)
}

/// `ĥ_{f_t}(a_t)`: the sum of the local escape rates over all places.
pub fn canonical_height(sp: &SpecializedPair, tol: f64) -> Result<Interval> {
    Ok(per_place_rates(sp, tol)?
        .values()
        .fold(Interval::zero(), |acc, g| acc.add(&g.to_interval(BITS))))
}

fn per_place_rates(sp: &SpecializedPair, tol: f64) -> Result<BTreeMap<PlaceQ, LogValue>> {
    let share = tol / sp.bad_places.len() as f64;
    sp.bad_places
        .iter()
        .map(|v| Ok((v.clone(), arithmetic_escape_rate(sp, v, share)?)))
        .collect()
}

// ---------------------------------------------------------------------------
// Weil heights on the parameter line.

/// `ξ_γ(t0)`: `1/(t0 - γ)` for finite `γ`, `t0` at infinity.
fn xi(g: &PlaceK, t0: &Rat) -> Result<Rat> {
    match g {
        PlaceK::Infinity => Ok(t0.clone()),
        PlaceK::Finite(c) => {
            if c == t0 {
                return Err(Error::OnSupport);
            }
            Ok(Rat::one() / (t0 - c))
        }
    }
}

fn scale_log(lv: &LogValue, k: &EscapeValue) -> LogValue {
    match lv {
        LogValue::Padic { p, lo, hi } => {
            // lo, hi ≥ 0 for log⁺ terms; keep the general product anyway.
            let c = [lo * k.lo(), lo * k.hi(), hi * k.lo(), hi * k.hi()];
            let mn = c.iter().min().unwrap().clone();
            let mx = c.iter().max().unwrap().clone();
            LogValue::Padic {
                p: p.clone(),
                lo: mn,
                hi: mx,
            }
        }
        LogValue::Archimedean(i) => {
            LogValue::Archimedean(i.mul(&Interval::from_rats(k.lo(), k.hi(), BITS)))
        }
    }
}

fn sub_log(a: &LogValue, b: &LogValue) -> Result<LogValue> {
    match (a, b) {
        (
            LogValue::Padic { p, lo, hi },
            LogValue::Padic {
                p: q,
                lo: lo2,
                hi: hi2,
            },
        ) if p == q => Ok(LogValue::Padic {
            p: p.clone(),
            lo: lo - hi2,
            hi: hi - lo2,
        }),
        (LogValue::Archimedean(x), LogValue::Archimedean(y)) => {
            Ok(LogValue::Archimedean(x.sub(y).rounded(BITS)))
        }
        _ => Err(Error::InvalidInput("log values at different places".into())),
    }
}

/// `λ_{D,v}(t0) = Σ_γ D_γ log⁺|ξ_γ(t0)|_v`.
pub fn weil_height_local(div: &DivisorQ, t0: &Rat, v: &PlaceQ) -> Result<LogValue> {
    let mut acc = LogValue::zero(v);
    for (g, k) in &div.entries {
        let x = xi(g, t0)?;
        acc = acc.add(&scale_log(&log_plus_abs(&x, v, BITS), k))?;
    }
    Ok(acc)
}

/// Places where some `λ_{D,v}(t0)` can be nonzero: infinity and the primes
/// at which some `ξ_γ(t0)` is not integral.
pub fn weil_places(div: &DivisorQ, t0: &Rat) -> Result<BTreeSet<PlaceQ>> {
    let mut out = BTreeSet::from([PlaceQ::Archimedean]);
    for g in div.entries.keys() {
        let x = xi(g, t0)?;
        if !x.is_zero() {
            out.extend(factorize(x.denom()).into_keys().map(PlaceQ::Prime));
        }
    }
    Ok(out)
}

/// `h_D(t0) = Σ_v λ_{D,v}(t0)`.
pub fn weil_height_d(div: &DivisorQ, t0: &Rat) -> Result<Interval> {
    let mut acc = Interval::zero();
    for v in weil_places(div, t0)? {
        acc = acc.add(&weil_height_local(div, t0, &v)?.to_interval(BITS));
    }
    Ok(acc)
}

/// `V_v(t0) = G_{F_t,v}(A_t) - λ_{D,v}(t0)`.
pub fn v_v(
    f: &LiftK,
    a: &PointK,
    div: &DivisorQ,
    t0: &Rat,
    v: &PlaceQ,
    tol: f64,
) -> Result<LogValue> {
    let sp = specialize_pair(f, a, t0)?;
    let g = arithmetic_escape_rate(&sp, v, tol)?;
    sub_log(&g, &weil_height_local(div, t0, v)?)
}

#[derive(Clone, Debug)]
pub struct HeightReport {
    pub t0: Rat,
    pub per_place: BTreeMap<PlaceQ, LogValue>,
    pub canonical: Interval,
    pub weil_hd: Interval,
    pub v: BTreeMap<PlaceQ, LogValue>,
    pub v_total: Interval,
}

pub fn height_report(
    f: &LiftK,
    a: &PointK,
    div: &DivisorQ,
    t0: &Rat,
    tol: f64,
) -> Result<HeightReport> {
    let sp = specialize_pair(f, a, t0)?;
    let per_place = per_place_rates(&sp, tol)?;
    let canonical = per_place
        .values()
        .fold(Interval::zero(), |acc, g| acc.add(&g.to_interval(BITS)));
    let weil_hd = weil_height_d(div, t0)?;
    let mut places: BTreeSet<PlaceQ> = per_place.keys().cloned().collect();
    places.extend(weil_places(div, t0)?);
    let mut v = BTreeMap::new();
    for pl in places {
        let g = per_place
            .get(&pl)
            .cloned()
            .unwrap_or_else(|| LogValue::zero(&pl));
        v.insert(pl.clone(), sub_log(&g, &weil_height_local(div, t0, &pl)?)?);
    }
    let v_total = canonical.sub(&weil_hd).rounded(BITS);
    Ok(HeightReport {
        t0: t0.clone(),
        per_place,
        canonical,
        weil_hd,
        v,
        v_total,
    })
}

#[derive(Clone, Debug)]
pub struct VSample {
    pub t0: Rat,
    pub place: PlaceQ,
    pub g: LogValue,
    pub hd: LogValue,
    pub v: LogValue,
}

/// `V_v` over a grid; parameters in the excluded set or on the support of
/// `D` are skipped.
pub fn sample_v(
    f: &LiftK,
    a: &PointK,
    div: &DivisorQ,
    grid: &[Rat],
    v: &PlaceQ,
    tol: f64,
) -> Result<Vec<VSample>> {
    let mut rows = Vec::new();
    for t0 in grid {
        let sp = match specialize_pair(f, a, t0) {
            Ok(sp) => sp,
            Err(Error::ExcludedParameter(_)) => continue,
            Err(e) => return Err(e),
        };
        let hd = match weil_height_local(div, t0, v) {
            Ok(h) => h,
            Err(Error::OnSupport) => continue,
            Err(e) => return Err(e),
        };
        let g = arithmetic_escape_rate(&sp, v, tol)?;
        let diff = sub_log(&g, &hd)?;
        rows.push(VSample {
            t0: t0.clone(),
            place: v.clone(),
            g,
            hd,
            v: diff,
        });
    }
    Ok(rows)
}

/// CSV rendering of [`sample_v`] rows with outward-rounded decimals.
pub fn samples_to_csv(rows: &[VSample], digits: u32) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "t_num", "t_den", "place", "G_lo", "G_hi", "hD_lo", "hD_hi", "V_lo", "V_hi",
    ])
    .expect("in-memory write");
    for r in rows {
        let (gl, gh) = r.g.to_interval(BITS).to_decimal(digits);
        let (hl, hh) = r.hd.to_interval(BITS).to_decimal(digits);
        let (vl, vh) = r.v.to_interval(BITS).to_decimal(digits);
        let rec = [
            r.t0.numer().to_string(),
            r.t0.denom().to_string(),
            r.place.to_string(),
            gl,
            gh,
            hl,
            hh,
            vl,
            vh,
        ];
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

// ---------------------------------------------------------------------------
// The quasiconstants α_v.

/// `α_v = lim d^(-n) log ‖(A_n)_γ‖_v` for a pair that is hole-avoiding at `γ`
/// once normalized there.
pub fn alpha_v(f: &LiftK, a: &PointK, g: &PlaceK, v: &PlaceQ, tol: f64) -> Result<LogValue> {
    let (fn_, _) = normalize_at(f, g);
    let (an, _) = normalize_point_at(a, g);
    match check_hole_avoiding(&fn_, &an, g, 200)? {
        HoleAvoidanceVerdict::HoleAvoiding { .. } => {}
        HoleAvoidanceVerdict::NotHoleAvoiding { hit_at } => {
            return Err(Error::NotHoleAvoiding(hit_at))
        }
        HoleAvoidanceVerdict::Undetermined { reason, .. } => {
            return Err(Error::ToleranceUnreachable(format!(
                "hole avoidance undetermined: {reason}"
            )))
        }
    }
    alpha_specialized(
        &specialize_lift(&fn_, g)?,
        &specialize_point(&an, g)?,
        v,
        tol,
    )
}

/// `lim d^(-n) log ‖F^n(A)‖_v` for a lift over `Q` whose vector orbit of `A`
/// never meets a hole of `F`.
pub fn alpha_specialized(fg: &LiftQ, ag: &PointQ, v: &PlaceQ, tol: f64) -> Result<LogValue> {
    let hf = hole_factorization(fg);
    if !hf.has_holes() {
        return escape_rate_q(fg, ag, v, tol);
    }
    let d = fg.degree();
    let ell = hf.ell();
    let h = &hf.h;
    if ell == 0 {
        // F̂ is a constant vector c: α = log|H(A)|/d + log|H(c)|/(d(d-1)).
        let c = [hf.fhat.p.coeffs[0].clone(), hf.fhat.q.coeffs[0].clone()];
        let ha = h.eval(&ag.z, &ag.w);
        let hc = h.eval(&c[0], &c[1]);
        if ha.is_zero() || hc.is_zero() {
            return Err(Error::NotHoleAvoiding(if ha.is_zero() { 1 } else { 2 }));
        }
        let w1 = ratio(1, d as i64);
        let w2 = ratio(1, (d * (d - 1)) as i64);
        return Ok(match v {
            PlaceQ::Prime(p) => {
                let x = -(&w1 * Rat::from_integer(vp_rat(&ha, p).into())
                    + &w2 * Rat::from_integer(vp_rat(&hc, p).into()));
                LogValue::padic_exact(p.clone(), x)
            }
            PlaceQ::Archimedean => LogValue::Archimedean(
                ln_rat(&ha.abs(), BITS)
                    .mul_rat(&w1, BITS)
                    .add(&ln_rat(&hc.abs(), BITS).mul_rat(&w2, BITS))
                    .rounded(BITS),
            ),
        });
    }
    alpha_series(h, &hf.fhat, ag, d, v, &rat_tol(tol)?)
}

/// Bits of a positive rational, rounded up: `log2 x ≤ bits_up(x)`.
fn bits_up(x: &Rat) -> Rat {
    let c = x.ceil().to_integer();
    Rat::from_integer(BigInt::from(c.bits()))
}

/// `α = log|r0| - log|λ̂|/(d-1) + Σ_i d^(-(i+1)) (log cont F̂_int(Y_i) + log|H(Y_i)|)`
/// with `A = r0·Y_0`, `F̂ = F̂_int/λ̂` and `Y_(i+1)` the primitive part of
/// `F̂_int(Y_i)`.
fn alpha_series(
    h: &BinaryForm<Rat>,
    fhat: &LiftQ,
    ag: &PointQ,
    d: usize,
    v: &PlaceQ,
    tol: &Rat,
) -> Result<LogValue> {
    let ell = fhat.degree();
    let k = d - ell;
    let (fi, lam) = fhat.to_integral();
    let (pc, qc) = (int_coeffs(&fi.p), int_coeffs(&fi.q));
    let hc = int_coeffs(h);
    let res = fi.resultant().to_integer().abs();
    let (y0, r0) = primitive_int(ag);
    let dm1 = Rat::from_integer((d as i64 - 1).into());
    // Archimedean growth constants (natural-log bounds via bit lengths times ln 2).
    let log_ch = bits_up(&Rat::from_integer(l1(&hc)));
    let log_l = bits_up(&Rat::from_integer(l1(&pc).max(l1(&qc))));
    let log_res = bits_up(&Rat::from_integer(res.clone()));
    let (p, bits_p) = match v {
        PlaceQ::Prime(p) => (
            Some(p.clone()),
            Rat::from_integer(BigInt::from(p.bits() - 1)),
        ),
        PlaceQ::Archimedean => (None, Rat::one()),
    };
    let q_hat = p.as_ref().map(|p| vp_big(&res, p)).unwrap_or(0);
    let ln2_hi = Rat::new(7_098_u32.into(), 10_240_u32.into()); // > ln 2
                                                                // Upper bound on Σ_{i≥N} d^(-(i+1)) (log cont_i + log|H(Y_i)|), in log p units
                                                                // at a prime (via log_p x ≤ bits(x)/(bits(p)-1)) and in natural units at infinity.
    let tail_bound = |n: usize, y: &[BigInt; 2]| -> Rat {
        let b = bits_up(&Rat::from_integer(y[0].abs().max(y[1].abs())));
        let ell_r = Rat::from_integer((ell as i64).into());
        let growth = if ell >= 2 {
            &b + &log_l / (&ell_r - Rat::one())
        } else {
            Rat::from_integer((k as i64).into()) * (&b / &dm1 + &log_l / (&dm1 * &dm1))
        };
        let h_part = &log_ch / &dm1 + growth;
        let total = match v {
            PlaceQ::Prime(_) => h_part / &bits_p + Rat::from_integer(q_hat.into()) / &dm1,
            PlaceQ::Archimedean => (h_part + &log_res / &dm1) * &ln2_hi,
        };
        total / d_pow(d, n)
    };
    let scale_real = match &p {
        Some(p) => Rat::from_integer(BigInt::from(p.bits())),
        None => Rat::one(),
    };
    let mut y = y0;
    // Exact data: at a prime the log p coefficient, at infinity the integers to take logs of.
    let mut coef = Rat::zero();
    let mut terms: Vec<(BigInt, usize)> = Vec::new();
    let mut i = 0;
    loop {
        let hy = eval_int(&hc, &y[0], &y[1]);
        if hy.is_zero() {
            return Err(Error::NotHoleAvoiding(i + 1));
        }
        let fz = eval_int(&pc, &y[0], &y[1]);
        let fw = eval_int(&qc, &y[0], &y[1]);
        let cont = fz.gcd(&fw);
        match &p {
            Some(p) => {
                let e = vp_big(&hy, p) + vp_big(&cont, p);
                coef -= Rat::from_integer(e.into()) / d_pow(d, i + 1);
            }
            None => terms.push((hy.abs() * &cont, i + 1)),
        }
        y = [fz / &cont, fw / &cont];
        i += 1;
        let tb = tail_bound(i, &y);
        if &tb * &scale_real <= *tol {
            return Ok(finish_alpha(p, coef, terms, tb, &r0, &lam, d));
        }
        if y[0].bits().max(y[1].bits()) > ALPHA_BIT_BUDGET || i > MAX_DEPTH {
            return Err(Error::ToleranceUnreachable(format!(
                "alpha series: iterates exceed the exact size budget after {i} terms"
            )));
        }
    }
}

fn finish_alpha(
    p: Option<BigInt>,
    coef: Rat,
    terms: Vec<(BigInt, usize)>,
    tail: Rat,
    r0: &Rat,
    lam: &Rat,
    d: usize,
) -> LogValue {
    let inv = ratio(1, d as i64 - 1);
    match p {
        Some(p) => {
            let shift = -Rat::from_integer(vp_rat(r0, &p).into())
                + &inv * Rat::from_integer(vp_rat(lam, &p).into());
            let hi = coef + shift;
            LogValue::Padic {
                p,
                lo: &hi - tail,
                hi,
            }
        }
        None => {
            let mut acc =
                ln_rat(&r0.abs(), BITS).sub(&ln_rat(&lam.abs(), BITS).mul_rat(&inv, BITS));
            for (m, j) in terms {
                if !m.is_one() {
                    let w = Rat::one() / d_pow(d, j);
                    acc = acc
                        .add(&ln_rat(&Rat::from_integer(m), BITS).mul_rat(&w, BITS))
                        .rounded(BITS);
                }
            }
            let hi = acc.hi().add(&Dyadic::from_rat_round(
                &tail,
                BITS,
                crate::exact::Round::Up,
            ));
            LogValue::Archimedean(Interval::new(acc.lo().clone(), hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, PolyQ, RationalFunction};
    use crate::lift::HomogeneousLift;

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyQ::from_ints(c))
    }

    fn lq(p: &[i64], q: &[i64]) -> LiftQ {
        HomogeneousLift::new(
            BinaryForm::new(p.iter().map(|&x| int(x)).collect()),
            BinaryForm::new(q.iter().map(|&x| int(x)).collect()),
        )
        .unwrap()
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
    fn squaring_map_heights() {
        let f = lq(&[1, 0, 0], &[0, 0, 1]);
        let a = ProjPoint::new(int(2), int(1)).unwrap();
        let g = escape_rate_q(&f, &a, &PlaceQ::Archimedean, 1e-12)
            .unwrap()
            .to_interval(BITS);
        assert!(
            g.contains_rat(&Rat::from_float(std::f64::consts::LN_2).unwrap())
                || g.width_f64() < 1e-12
        );
        let (lo, hi) = g.to_f64();
        assert!(
            (lo - std::f64::consts::LN_2).abs() < 1e-11
                && (hi - std::f64::consts::LN_2).abs() < 1e-11
        );
        let g2 = escape_rate_q(&f, &a, &PlaceQ::Prime(2.into()), 1e-9).unwrap();
        assert_eq!(g2.exact_coefficient(), Some(&Rat::zero()));
        let a = ProjPoint::new(rat(1, 2), int(1)).unwrap();
        let g2 = escape_rate_q(&f, &a, &PlaceQ::Prime(2.into()), 1e-9).unwrap();
        assert_eq!(g2.exact_coefficient(), Some(&int(1)));
    }

    #[test]
    fn specialization_quasi_adelic() {
        let (f, a) = quasi_adelic();
        let sp = specialize_pair(&f, &a, &int(2)).unwrap();
        assert_eq!(sp.f_int, lq(&[1, 1, 0], &[0, 1, 2]));
        assert_eq!(sp.f_int.resultant(), int(2));
        assert_eq!(
            sp.bad_places,
            BTreeSet::from([PlaceQ::Prime(2.into()), PlaceQ::Archimedean])
        );
        assert!(matches!(
            specialize_pair(&f, &a, &int(1)),
            Err(Error::ExcludedParameter(_))
        ));
        let g = arithmetic_escape_rate(&sp, &PlaceQ::Prime(2.into()), 1e-9).unwrap();
        let LogValue::Padic { lo, hi, .. } = g else {
            panic!()
        };
        assert!(lo <= hi && hi <= Rat::zero());
    }

    #[test]
    fn padic_matches_exact_orbit() {
        let (f, a) = quasi_adelic();
        let sp = specialize_pair(&f, &a, &rat(4, 3)).unwrap();
        let p = BigInt::from(2);
        let g = arithmetic_escape_rate(&sp, &PlaceQ::Prime(p.clone()), 1e-6).unwrap();
        let vals = padic_orbit_valuations(&sp.f_t, &sp.a_t, &p, 12).unwrap();
        // -v_p(‖F^n A‖)/2^n approximates the log p coefficient up to O(2^-n).
        let approx = Rat::new((-vals[12]).into(), 4096.into());
        let LogValue::Padic { lo, hi, .. } = g else {
            panic!()
        };
        let q = rat(16, 4096);
        assert!(approx.clone() + &q >= lo && approx - q <= hi);
    }

    #[test]
    fn weil_heights() {
        let inf = DivisorQ::from_entries(BTreeMap::from([(
            PlaceK::Infinity,
            EscapeValue::Exact(int(1)),
        )]));
        let h = weil_height_d(&inf, &int(3)).unwrap();
        assert!(h.contains_rat(&Rat::from_float(3f64.ln()).unwrap()) || h.width_f64() < 1e-30);
        assert!((h.mid_f64() - 3f64.ln()).abs() < 1e-15);
        let zero = DivisorQ::from_entries(BTreeMap::from([(
            PlaceK::zero(),
            EscapeValue::Exact(int(1)),
        )]));
        let h = weil_height_d(&zero, &rat(1, 5)).unwrap();
        assert!((h.mid_f64() - 5f64.ln()).abs() < 1e-15);
        assert!(matches!(
            weil_height_d(&zero, &int(0)),
            Err(Error::OnSupport)
        ));
        assert_eq!(
            weil_height_d(&DivisorQ::zero(), &int(7)).unwrap(),
            Interval::zero()
        );
    }

    #[test]
    fn alpha_two_quasi_adelic() {
        let (f, a) = quasi_adelic();
        let oracle: f64 = -std::f64::consts::LN_2
            * (1..=6)
                .map(|k| 1.0 / (2f64.powi(1 << k) - 1.0))
                .sum::<f64>();
        let al = alpha_v(&f, &a, &PlaceK::zero(), &PlaceQ::Prime(2.into()), 1e-7).unwrap();
        let i = al.to_interval(BITS);
        assert!(i.width_f64() <= 1e-6);
        let (lo, hi) = i.to_f64();
        assert!(
            lo - 1e-12 <= oracle && oracle <= hi + 1e-12,
            "[{lo},{hi}] vs {oracle}"
        );
        let arch = alpha_v(&f, &a, &PlaceK::zero(), &PlaceQ::Archimedean, 1e-6).unwrap();
        assert!(arch.to_interval(BITS).is_positive());
    }

    #[test]
    fn orbit_valuations_quasi_adelic() {
        let (f, a) = quasi_adelic();
        let fg = specialize_lift(&f, &PlaceK::zero()).unwrap();
        let ag = specialize_point(&a, &PlaceK::zero()).unwrap();
        for p in [2, 3, 5, 7] {
            let v = padic_orbit_valuations(&fg, &ag, &BigInt::from(p), 10).unwrap();
            for (n, e) in v.iter().enumerate() {
                assert_eq!(*e == 0, n < p as usize, "p = {p}, n = {n}");
            }
        }
    }
}
