use std::fmt;

use num_traits::{One, Zero};

use super::place::{ord_at, PlaceK};
use super::poly::PolyQ;
use super::rat::Rat;
use super::ratfunc::RationalFunction;
use crate::{Error, Result};

/// Absolute precision used to encode an exact zero.
pub const EXACT_ZERO_ABS: i64 = i64::MAX / 8;

/// Truncated Laurent expansion `Σ coeffs[i]·u^(val+i) + O(u^(val+len))` in the
/// local uniformizer `u` of a place.
///
/// When `exact_leading` is false the retained coefficients all vanished and the
/// jet only certifies `O(u^val)`; `coeffs` is then empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentJet {
    pub place: PlaceK,
    pub val: i64,
    pub coeffs: Vec<Rat>,
    pub exact_leading: bool,
}

impl LaurentJet {
    /// Builds a jet from coefficients starting at `u^start`, known up to
    /// (excluding) `u^abs`. Leading zeros are stripped.
    pub fn from_series(place: PlaceK, start: i64, mut coeffs: Vec<Rat>, abs: i64) -> Self {
        let keep = (abs - start).max(0) as usize;
        coeffs.truncate(keep);
        coeffs.resize(keep, Rat::zero());
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => LaurentJet {
                place,
                val: start + k as i64,
                coeffs: coeffs.split_off(k),
                exact_leading: true,
            },
            None => Self::indeterminate(place, abs),
        }
    }

    /// A quantity known only to be `O(u^abs)`.
    pub fn indeterminate(place: PlaceK, abs: i64) -> Self {
        LaurentJet {
            place,
            val: abs.min(EXACT_ZERO_ABS),
            coeffs: Vec::new(),
            exact_leading: false,
        }
    }

    /// The exact value 0 (an indeterminate jet with unbounded precision).
    pub fn exact_zero(place: PlaceK) -> Self {
        Self::indeterminate(place, EXACT_ZERO_ABS)
    }

    pub fn is_exact_zero(&self) -> bool {
        !self.exact_leading && self.val >= EXACT_ZERO_ABS
    }

    pub fn constant(place: PlaceK, c: Rat, precision: usize) -> Self {
        let mut v = vec![Rat::zero(); precision.max(1)];
        v[0] = c;
        Self::from_series(place, 0, v, precision as i64)
    }

    /// Relative precision (number of retained coefficients).
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the first unknown term.
    pub fn abs_precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn is_indeterminate(&self) -> bool {
        !self.exact_leading
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.exact_leading.then(|| &self.coeffs[0])
    }

    /// Coefficient of `u^k`, `None` beyond the known range.
    pub fn coeff(&self, k: i64) -> Option<Rat> {
        if k >= self.abs_precision() {
            None
        } else if k < self.val {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[(k - self.val) as usize].clone())
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.place, o.place);
        let abs = self.abs_precision().min(o.abs_precision());
        let start = self.val.min(o.val);
        let v = (start..abs)
            .map(|k| self.coeff(k).unwrap() + o.coeff(k).unwrap())
            .collect();
        Self::from_series(self.place.clone(), start, v, abs)
    }

    pub fn neg(&self) -> Self {
        LaurentJet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::exact_zero(self.place.clone());
        }
        LaurentJet {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.place, o.place);
        match (self.exact_leading, o.exact_leading) {
            (true, true) => {
                let n = self.precision().min(o.precision());
                let mut v = vec![Rat::zero(); n];
                for i in 0..n {
                    if self.coeffs[i].is_zero() {
                        continue;
                    }
                    for j in 0..n - i {
                        v[i + j] += &self.coeffs[i] * &o.coeffs[j];
                    }
                }
                let start = self.val + o.val;
                Self::from_series(self.place.clone(), start, v, start + n as i64)
            }
            _ => Self::indeterminate(self.place.clone(), self.val.saturating_add(o.val)),
        }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        LaurentJet {
            val: self.val + k,
            ..self.clone()
        }
    }

    /// Multiplicative inverse; requires an exact leading term.
    pub fn inv(&self) -> Result<Self> {
        if !self.exact_leading {
            return Err(Error::PrecisionExhausted(self.precision()));
        }
        let n = self.precision();
        let a0inv = self.coeffs[0].recip();
        let mut b = vec![Rat::zero(); n];
        b[0] = a0inv.clone();
        for k in 1..n {
            let mut s = Rat::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &b[k - i];
            }
            b[k] = -s * &a0inv;
        }
        Ok(Self::from_series(
            self.place.clone(),
            -self.val,
            b,
            -self.val + n as i64,
        ))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Truncates to relative precision `p`.
    pub fn truncate(&self, p: usize) -> Self {
        if !self.exact_leading || p >= self.precision() {
            return self.clone();
        }
        LaurentJet {
            coeffs: self.coeffs[..p].to_vec(),
            ..self.clone()
        }
    }
}

impl fmt::Display for LaurentJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = match &self.place {
            PlaceK::Finite(c) if c.is_zero() => "t".to_string(),
            PlaceK::Finite(c) => format!("(t - {c})"),
            PlaceK::Infinity => "(1/t)".to_string(),
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.val + i as i64;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*{u}")?,
                _ => write!(f, "{c}*{u}^{k}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({u}^{})", self.abs_precision())
    }
}

/// Series `num(u)/den(u)` to `p` terms, both polynomials with nonzero constant
/// term in the denominator.
fn series_quotient(num: &PolyQ, den: &PolyQ, p: usize) -> Vec<Rat> {
    let d0inv = den.coeff(0).recip();
    let mut out = vec![Rat::zero(); p];
    for k in 0..p {
        let mut s = num.coeff(k);
        for i in 1..=k.min(den.degree().unwrap_or(0)) {
            s -= den.coeff(i) * &out[k - i];
        }
        out[k] = s * &d0inv;
    }
    out
}

/// Expansion of `x` at `γ` with `p` correct coefficients.
pub fn laurent_expand(x: &RationalFunction, g: &PlaceK, p: usize) -> Result<LaurentJet> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let v = ord_at(x, g)?;
    let loc = g.to_local(x);
    let zn = loc.num().low_order().unwrap_or(0);
    let zd = loc.den().low_order().unwrap_or(0);
    let m = PolyQ::monomial(Rat::one(), zn);
    let num = loc.num().div_exact(&m).expect("u^k divides");
    let den = loc
        .den()
        .div_exact(&PolyQ::monomial(Rat::one(), zd))
        .expect("u^k divides");
    debug_assert_eq!(zn as i64 - zd as i64, v);
    let coeffs = series_quotient(&num, &den, p);
    Ok(LaurentJet {
        place: g.clone(),
        val: v,
        coeffs,
        exact_leading: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    #[test]
    fn expansions() {
        let x = RationalFunction::new(PolyQ::one(), PolyQ::from_ints(&[1, -1]));
        let j = laurent_expand(&x, &PlaceK::zero(), 3).unwrap();
        assert_eq!((j.val, j.coeffs.clone()), (0, vec![int(1), int(1), int(1)]));
        let y = RationalFunction::from_poly(PolyQ::from_ints(&[0, -1, 1]));
        let j = laurent_expand(&y, &PlaceK::zero(), 2).unwrap();
        assert_eq!((j.val, j.coeffs.clone()), (1, vec![int(-1), int(1)]));
        let j = laurent_expand(&RationalFunction::t(), &PlaceK::Infinity, 1).unwrap();
        assert_eq!((j.val, j.coeffs.clone()), (-1, vec![int(1)]));
    }

    #[test]
    fn cancellation_becomes_indeterminate() {
        let a = LaurentJet::from_series(PlaceK::zero(), 0, vec![int(1), int(2)], 2);
        let b = LaurentJet::from_series(PlaceK::zero(), 0, vec![int(1), int(2)], 2);
        let d = a.sub(&b);
        assert!(d.is_indeterminate());
        assert_eq!(d.abs_precision(), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = RationalFunction::new(PolyQ::from_ints(&[2, 3]), PolyQ::from_ints(&[0, 1, 5]));
        let j = laurent_expand(&x, &PlaceK::zero(), 6).unwrap();
        let ji = laurent_expand(&x.inv(), &PlaceK::zero(), 6).unwrap();
        assert_eq!(j.inv().unwrap(), ji);
    }
}
