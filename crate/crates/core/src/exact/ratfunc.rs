use std::fmt;

use num_traits::{One, Zero};

use super::poly::PolyQ;
use super::rat::Rat;

/// Element of `Q(t)` as a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: PolyQ,
    den: PolyQ,
}

impl RationalFunction {
    /// Builds `num/den`, reducing; panics if `den = 0`.
    pub fn new(num: PolyQ, den: PolyQ) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let l = den.leading();
        if !l.is_one() {
            let inv = l.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: PolyQ) -> Self {
        RationalFunction {
            num: p,
            den: PolyQ::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(PolyQ::constant(c))
    }

    /// The parameter `t`.
    pub fn t() -> Self {
        Self::from_poly(PolyQ::monomial(Rat::one(), 1))
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: PolyQ::zero(),
            den: PolyQ::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn num(&self) -> &PolyQ {
        &self.num
    }

    pub fn den(&self) -> &PolyQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational constant, if this function is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs();
        RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        }
    }

    /// Value at `t = c`, or `None` at a pole.
    pub fn eval(&self, c: &Rat) -> Option<Rat> {
        let d = self.den.eval(c);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(c) / d)
        }
    }

    /// Limit as `t → ∞`, or `None` when it is infinite.
    pub fn eval_at_infinity(&self) -> Option<Rat> {
        let dn = self.num.degree();
        let dd = self.den.degree().unwrap_or(0);
        match dn {
            None => Some(Rat::zero()),
            Some(n) if n < dd => Some(Rat::zero()),
            Some(n) if n == dd => Some(self.num.leading() / self.den.leading()),
            _ => None,
        }
    }

    /// Substitutes `t ↦ r(t)`.
    pub fn compose(&self, r: &Self) -> Self {
        let eval_poly = |p: &PolyQ| {
            let mut acc = Self::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(r).add(&Self::constant(c.clone()));
            }
            acc
        };
        eval_poly(&self.num).div(&eval_poly(&self.den))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $inh:ident) => {
        impl std::ops::$tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                RationalFunction::$inh(&self, &o)
            }
        }
    };
}

forward_op!(Add, add, add);
forward_op!(Sub, sub, sub);
forward_op!(Mul, mul, mul);
forward_op!(Div, div, div);

impl std::ops::Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(&self)
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl From<Rat> for RationalFunction {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl From<PolyQ> for RationalFunction {
    fn from(p: PolyQ) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &PolyQ| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}
