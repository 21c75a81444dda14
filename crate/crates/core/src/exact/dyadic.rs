use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;

/// Rounding direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Round {
    Down,
    Up,
}

/// The number `mant · 2^exp`.
///
/// Not kept in a canonical form; use [`Dyadic::cmp`] rather than structural
/// equality when comparing values.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shl(x: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    x << (k as usize)
}

/// `floor` or `ceil` of `x / 2^k` for `k ≥ 0`.
fn shr_round(x: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    // `>>` on BigInt rounds toward negative infinity.
    match dir {
        Round::Down => x >> k,
        Round::Up => -((-x) >> k),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            mant: n.into(),
            exp: 0,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        // zero carries no scale; aligning against its exponent would blow up the mantissa
        if o.mant.is_zero() {
            return self.clone();
        }
        if self.mant.is_zero() {
            return o.clone();
        }
        let e = self.exp.min(o.exp);
        let a = shl(&self.mant, self.exp - e);
        let b = shl(&o.mant, o.exp - e);
        Dyadic {
            mant: a + b,
            exp: e,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.mant.is_zero() || o.mant.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }

    /// Multiplies by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.mant.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds to at most `bits` significant bits in direction `dir`.
    pub fn round(&self, bits: u64, dir: Round) -> Self {
        let len = self.mant.bits();
        if len <= bits {
            return self.clone();
        }
        let k = len - bits;
        Dyadic {
            mant: shr_round(&self.mant, k, dir),
            exp: self.exp + k as i64,
        }
    }

    /// Nearest dyadic with `bits` significant bits on the requested side of `r`.
    pub fn from_rat_round(r: &Rat, bits: u64, dir: Round) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let (n, d) = (r.numer(), r.denom());
        // Choose the shift so the quotient has about `bits` bits.
        let shift = bits as i64 + d.bits() as i64 - n.bits() as i64 + 1;
        let (num, den) = if shift >= 0 {
            (shl(n, shift), d.clone())
        } else {
            (n.clone(), shl(d, -shift))
        };
        let q = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic {
            mant: q,
            exp: -shift,
        }
        .round(bits, dir)
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(shl(&self.mant, self.exp))
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.round(60, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        if r.exp > i32::MAX as i64 {
            return if m == 0.0 {
                0.0
            } else {
                m.signum() * f64::INFINITY
            };
        }
        if r.exp < i32::MIN as i64 {
            return 0.0;
        }
        m * 2f64.powi(r.exp as i32)
    }

    /// The `e` with `|x| ∈ [2^(e-1), 2^e)`.
    pub fn magnitude_exp(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    pub fn max_of(&self, o: &Self) -> Self {
        if self.cmp(o) == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn min_of(&self, o: &Self) -> Self {
        if self.cmp(o) == Ordering::Greater {
            o.clone()
        } else {
            self.clone()
        }
    }

    /// Decimal string with `digits` fractional digits, rounded in direction `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let r = self.to_rat() * Rat::from_integer(BigInt::from(10).pow(digits));
        let n = match dir {
            Round::Down => r.floor().to_integer(),
            Round::Up => r.ceil().to_integer(),
        };
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let e = self.exp.min(o.exp);
        let sa = self.mant.sign();
        let sb = o.mant.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        // Same sign: compare magnitudes first by bit position to avoid huge shifts.
        let ma = self.magnitude_exp();
        let mb = o.magnitude_exp();
        if !self.mant.is_zero() && ma != mb {
            let c = ma.cmp(&mb);
            return if self.mant.is_negative() {
                c.reverse()
            } else {
                c
            };
        }
        shl(&self.mant, self.exp - e).cmp(&shl(&o.mant, o.exp - e))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn directed_rounding_brackets() {
        let third = rat(1, 3);
        let lo = Dyadic::from_rat_round(&third, 50, Round::Down);
        let hi = Dyadic::from_rat_round(&third, 50, Round::Up);
        assert!(lo.to_rat() < third && third < hi.to_rat());
        assert!(hi.sub(&lo).to_rat() < rat(1, 1 << 50));
        let neg = Dyadic::from_rat_round(&rat(-1, 3), 50, Round::Down);
        assert!(neg.to_rat() < rat(-1, 3));
    }

    #[test]
    fn compare_and_decimal() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let b = Dyadic::new(BigInt::from(12), -3);
        assert_eq!(a, b);
        assert!(Dyadic::from_int(-2) < Dyadic::from_int(1));
        assert!(Dyadic::new(BigInt::from(-1), 10) < Dyadic::new(BigInt::from(-1), 2));
        assert_eq!(a.to_decimal(3, Round::Down), "1.500");
        assert_eq!(
            Dyadic::new(BigInt::from(-1), -2).to_decimal(1, Round::Down),
            "-0.3"
        );
        assert_eq!(
            Dyadic::new(BigInt::from(-1), -2).to_decimal(1, Round::Up),
            "-0.2"
        );
    }
}
