use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::rat::Rat;

/// Default working precision (bits of dyadic mantissa).
pub const DEFAULT_BITS: u64 = 128;

/// Closed real interval `[lo, hi]` with dyadic endpoints.
///
/// Arithmetic is exact on endpoints; call [`Interval::rounded`] to shrink
/// mantissas (outward) when they grow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    /// Tightest enclosure of `r` at `bits` bits.
    pub fn from_rat(r: &Rat, bits: u64) -> Self {
        Interval {
            lo: Dyadic::from_rat_round(r, bits, Round::Down),
            hi: Dyadic::from_rat_round(r, bits, Round::Up),
        }
    }

    /// Enclosure of `[a, b]` for rationals `a ≤ b`.
    pub fn from_rats(a: &Rat, b: &Rat, bits: u64) -> Self {
        Interval {
            lo: Dyadic::from_rat_round(a, bits, Round::Down),
            hi: Dyadic::from_rat_round(b, bits, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.add(&o.lo),
            hi: self.hi.add(&o.hi),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.sub(&o.hi),
            hi: self.hi.sub(&o.lo),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Multiplication by an exact rational, rounded outward to `bits`.
    pub fn mul_rat(&self, r: &Rat, bits: u64) -> Self {
        let a = self.lo.to_rat() * r;
        let b = self.hi.to_rat() * r;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self::from_rats(&a, &b, bits)
    }

    /// Multiplication by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        Interval {
            lo: self.lo.ldexp(k),
            hi: self.hi.ldexp(k),
        }
    }

    /// Componentwise maximum (enclosure of `max(x, y)`).
    pub fn max(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.max_of(&o.lo),
            hi: self.hi.max_of(&o.hi),
        }
    }

    /// Enclosure of `|x|`.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: self.hi.max_of(&self.lo.neg()),
            }
        }
    }

    /// Convex hull.
    pub fn hull(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.min_of(&o.lo),
            hi: self.hi.max_of(&o.hi),
        }
    }

    /// Widens the upper end by `e ≥ 0` and the lower end by `e`.
    pub fn widen(&self, lo_by: &Dyadic, hi_by: &Dyadic) -> Self {
        Interval {
            lo: self.lo.sub(lo_by),
            hi: self.hi.add(hi_by),
        }
    }

    pub fn rounded(&self, bits: u64) -> Self {
        Interval {
            lo: self.lo.round(bits, Round::Down),
            hi: self.hi.round(bits, Round::Up),
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rat(&self, x: &Rat) -> bool {
        &self.lo.to_rat() <= x && x <= &self.hi.to_rat()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_subset_of(&self, o: &Self) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).ldexp(-1)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    /// Outward-rounded decimal endpoints.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        (
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up),
        )
    }

    /// Enclosure of `ln x` for `x` with positive lower endpoint.
    pub fn ln(&self, bits: u64) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        let lo = ln_dyadic(&self.lo, bits).lo;
        let hi = ln_dyadic(&self.hi, bits).hi;
        Some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal(12);
        write!(f, "[{a}, {b}]")
    }
}

/// Fixed-point enclosure of `2·atanh(a/b)` for `0 ≤ a/b ≤ 1/3`, returned as
/// `(value, err)` in units of `2^-w`.
fn two_atanh_fixed(a: &BigInt, b: &BigInt, w: u64) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let z = (a << (w as usize)).div_floor(b);
    if z.is_zero() {
        // a/b < 2^-w, so 2·atanh(a/b) < 3·2^-w.
        return (BigInt::zero(), BigInt::from(3));
    }
    let z2 = (&z * &z) >> (w as usize);
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * j + 1);
        term = (&term * &z2) >> (w as usize);
        j += 1;
    }
    // Each truncated term is off by at most j+2 ulps; the dropped tail is below
    // 2 ulps since consecutive terms shrink by at least 9.
    let err = BigInt::from((j + 2) * (j + 2) + 4);
    (sum * 2, err * 2)
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let v = two_atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Enclosure of `ln m` for a positive integer `m` at `w` fractional bits,
/// as `(value, err)` in units of `2^-w`, plus `extra_k` copies of `ln 2`.
fn ln_int_fixed(m: &BigInt, extra_k: i64, w: u64) -> (BigInt, BigInt) {
    debug_assert!(m.is_positive());
    let k = m.bits() as i64 - 1;
    let p = BigInt::one() << (k as usize);
    // m/2^k ∈ [1,2): ln(m/2^k) = 2 atanh((m - p)/(m + p)).
    let (v, e) = two_atanh_fixed(&(m - &p), &(m + &p), w);
    let (l2, e2) = ln2_fixed(w);
    let kk = BigInt::from(k + extra_k);
    (v + &l2 * &kk, e + e2 * kk.abs())
}

/// Enclosure of `ln x` for a positive dyadic `x`.
fn ln_dyadic(x: &Dyadic, bits: u64) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    let m = x.mantissa();
    let keep = bits + 16;
    // Reduce the mantissa to `keep` bits, enclosing it between two integers.
    let (mlo, mhi, shift) = if m.bits() > keep {
        let s = m.bits() - keep;
        let t = m >> (s as usize);
        (t.clone(), t + 1, s as i64)
    } else {
        (m.clone(), m.clone(), 0)
    };
    let e = x.exponent() + shift;
    let guard = 24 + 64 - (e.unsigned_abs() | 1).leading_zeros() as u64;
    let w = bits + guard;
    let (a, ea) = ln_int_fixed(&mlo, e, w);
    let (b, eb) = if mlo == mhi {
        (a.clone(), ea.clone())
    } else {
        ln_int_fixed(&mhi, e, w)
    };
    let lo = Dyadic::new(a - ea, -(w as i64));
    let hi = Dyadic::new(b + eb, -(w as i64));
    Interval {
        lo: lo.round(bits, Round::Down),
        hi: hi.round(bits, Round::Up),
    }
}

/// Certified enclosure of `ln r` for a positive rational `r`.
pub fn ln_rat(r: &Rat, bits: u64) -> Interval {
    assert!(r.is_positive(), "ln of a non-positive rational");
    let n = ln_dyadic(&Dyadic::from_int(r.numer().clone()), bits);
    if r.denom().is_one() {
        return n;
    }
    let d = ln_dyadic(&Dyadic::from_int(r.denom().clone()), bits);
    n.sub(&d).rounded(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn check(r: Rat, expect: f64) {
        let i = ln_rat(&r, DEFAULT_BITS);
        let (lo, hi) = i.to_f64();
        assert!(
            lo <= expect + 1e-15 && expect - 1e-15 <= hi,
            "{r}: [{lo},{hi}] vs {expect}"
        );
        assert!(i.width_f64() < 1e-30, "width {}", i.width_f64());
    }

    #[test]
    fn logs_of_rationals() {
        check(int(2), std::f64::consts::LN_2);
        check(int(3), 3f64.ln());
        check(int(10), 10f64.ln());
        check(rat(22, 7), (22f64 / 7.0).ln());
        check(rat(1, 1000), (0.001f64).ln());
        check(int(1), 0.0);
        assert!(ln_rat(&int(1), 64).contains(&Dyadic::zero()));
    }

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458176568...
        let (lo, hi) = ln_rat(&int(2), DEFAULT_BITS).to_decimal(30);
        assert_eq!(lo, "0.693147180559945309417232121458");
        assert_eq!(hi, "0.693147180559945309417232121459");
    }

    #[test]
    fn huge_integer_log() {
        let big = BigInt::from(3).pow(5000u32);
        let i = ln_rat(&Rat::from_integer(big), DEFAULT_BITS);
        let expect = 5000.0 * 3f64.ln();
        assert!((i.mid_f64() - expect).abs() < 1e-9);
        assert!(i.width_f64() < 1e-20);
    }

    #[test]
    fn interval_ops() {
        let a = Interval::from_rats(&int(-1), &int(2), 64);
        let b = Interval::from_rats(&int(3), &int(4), 64);
        assert_eq!(a.mul(&b).to_f64(), (-4.0, 8.0));
        assert_eq!(a.sub(&b).to_f64(), (-5.0, -1.0));
        assert_eq!(a.abs().to_f64(), (0.0, 2.0));
        assert!(a.contains_zero() && !b.contains_zero());
        let t = Interval::from_int(1).mul_rat(&rat(1, 3), 64);
        assert!(t.contains_rat(&rat(1, 3)));
    }
}
