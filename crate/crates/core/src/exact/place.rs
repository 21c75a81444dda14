use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::factor::is_prime;
use super::poly::PolyQ;
use super::rat::{parse_rat, Rat};
use super::ratfunc::RationalFunction;
use crate::{Error, Result};

/// A `Q`-rational place of `Q(t)`: `t = c` or `t = ∞`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PlaceK {
    Finite(Rat),
    Infinity,
}

impl PlaceK {
    pub fn zero() -> Self {
        PlaceK::Finite(Rat::zero())
    }

    /// The local uniformizer `t - c`, or `1/t` at infinity.
    pub fn uniformizer(&self) -> RationalFunction {
        match self {
            PlaceK::Finite(c) => RationalFunction::from_poly(PolyQ::linear_root(c)),
            PlaceK::Infinity => RationalFunction::t().inv(),
        }
    }

    /// Residue of `x` at this place (value of `x` there), `None` at a pole.
    pub fn residue(&self, x: &RationalFunction) -> Option<Rat> {
        match self {
            PlaceK::Finite(c) => x.eval(c),
            PlaceK::Infinity => x.eval_at_infinity(),
        }
    }

    /// Writes `x` as a rational function of the local coordinate `u`, where
    /// `t = c + u` or `t = 1/u`.
    pub fn to_local(&self, x: &RationalFunction) -> RationalFunction {
        match self {
            PlaceK::Finite(c) => {
                RationalFunction::new(x.num().taylor_shift(c), x.den().taylor_shift(c))
            }
            PlaceK::Infinity => {
                let n = x
                    .num()
                    .degree()
                    .unwrap_or(0)
                    .max(x.den().degree().unwrap_or(0));
                RationalFunction::new(x.num().reversed(n), x.den().reversed(n))
            }
        }
    }
}

impl fmt::Display for PlaceK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceK::Finite(c) => write!(f, "{c}"),
            PlaceK::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for PlaceK {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(PlaceK::Infinity),
            other => Ok(PlaceK::Finite(parse_rat(other)?)),
        }
    }
}

/// A place of `Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PlaceQ {
    Prime(BigInt),
    Archimedean,
}

impl PlaceQ {
    /// Checked constructor for a finite place.
    pub fn prime(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(PlaceQ::Prime(p))
    }
}

impl fmt::Display for PlaceQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceQ::Prime(p) => write!(f, "{p}"),
            PlaceQ::Archimedean => write!(f, "inf"),
        }
    }
}

impl FromStr for PlaceQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(PlaceQ::Archimedean),
            other => {
                let p: BigInt = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad place {other:?}")))?;
                PlaceQ::prime(p).map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }
}

fn ord_poly(p: &PolyQ, g: &PlaceK) -> i64 {
    match g {
        PlaceK::Finite(c) => p.root_multiplicity(c) as i64,
        PlaceK::Infinity => -(p.degree().unwrap_or(0) as i64),
    }
}

/// Order of vanishing of `x` at `γ` (negative at poles).
pub fn ord_at(x: &RationalFunction, g: &PlaceK) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(ord_poly(x.num(), g) - ord_poly(x.den(), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn orders() {
        let x = RationalFunction::from_poly(PolyQ::from_ints(&[0, -1, 1]));
        assert_eq!(ord_at(&x, &PlaceK::zero()).unwrap(), 1);
        assert_eq!(ord_at(&x, &PlaceK::Finite(int(1))).unwrap(), 1);
        assert_eq!(ord_at(&x, &PlaceK::Finite(int(2))).unwrap(), 0);
        assert_eq!(ord_at(&x, &PlaceK::Infinity).unwrap(), -2);
        assert_eq!(
            ord_at(&RationalFunction::t().inv(), &PlaceK::Infinity).unwrap(),
            1
        );
        assert_eq!(
            ord_at(&RationalFunction::zero(), &PlaceK::Infinity),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn parsing() {
        assert_eq!("inf".parse::<PlaceK>().unwrap(), PlaceK::Infinity);
        assert_eq!("3/2".parse::<PlaceK>().unwrap(), PlaceK::Finite(rat(3, 2)));
        assert_eq!(
            "7".parse::<PlaceQ>().unwrap(),
            PlaceQ::Prime(BigInt::from(7))
        );
        assert!("8".parse::<PlaceQ>().is_err());
    }

    #[test]
    fn local_coordinates() {
        let x = RationalFunction::from_poly(PolyQ::from_ints(&[0, -1, 1]));
        let at1 = PlaceK::Finite(int(1)).to_local(&x);
        assert_eq!(
            at1,
            RationalFunction::from_poly(PolyQ::from_ints(&[0, 1, 1]))
        );
        let inf = PlaceK::Infinity.to_local(&x);
        assert_eq!(
            inf,
            RationalFunction::new(PolyQ::from_ints(&[1, -1]), PolyQ::from_ints(&[0, 0, 1]))
        );
        assert_eq!(
            PlaceK::Infinity.residue(&RationalFunction::t().inv()),
            Some(Rat::zero())
        );
    }
}
