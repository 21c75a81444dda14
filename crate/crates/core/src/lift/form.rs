use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{PolyQ, Rat, RationalFunction};

/// Coefficient fields used for lifts: `Q` and `Q(t)`.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rat(r: &Rat) -> Self;

    /// A canonical scalar `c` with `(a/c, b/c)` primitive; `a`, `b` not both zero.
    fn pair_content(a: &Self, b: &Self) -> Self;

    /// Rough storage size in bits, used for resource budgets.
    fn size_bits(&self) -> u64;

    fn determinant(m: Vec<Vec<Self>>) -> Self {
        crate::lift::map::determinant(m)
    }
}

impl Field for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    /// Positive rational `g` with `a/g`, `b/g` coprime integers.
    fn pair_content(a: &Self, b: &Self) -> Self {
        let num = a.numer().gcd(b.numer());
        let den = a.denom().lcm(b.denom());
        Rat::new(num, den)
    }

    fn size_bits(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

impl Field for RationalFunction {
    fn from_rat(r: &Rat) -> Self {
        RationalFunction::constant(r.clone())
    }

    /// `gcd(numerators)/lcm(denominators)`, monic over monic.
    fn pair_content(a: &Self, b: &Self) -> Self {
        let g = a.num().gcd(b.num());
        let l = lcm_poly(a.den(), b.den());
        RationalFunction::new(g, l)
    }

    fn size_bits(&self) -> u64 {
        let p = |q: &PolyQ| {
            q.coeffs()
                .iter()
                .map(|c| c.numer().bits() + c.denom().bits())
                .sum::<u64>()
        };
        p(self.num()) + p(self.den())
    }

    // Gaussian elimination over Q(t) spends its time in gcds; Bareiss on
    // polynomial rows keeps every entry a polynomial instead.
    fn determinant(m: Vec<Vec<Self>>) -> Self {
        let mut scale = PolyQ::one();
        let mut a: Vec<Vec<PolyQ>> = m
            .into_iter()
            .map(|row| {
                let l = row.iter().fold(PolyQ::one(), |l, x| lcm_poly(&l, x.den()));
                scale = scale.mul(&l);
                row.iter()
                    .map(|x| x.num().mul(&l.div_exact(x.den()).expect("lcm")))
                    .collect()
            })
            .collect();
        let n = a.len();
        let mut sign = false;
        let mut prev = PolyQ::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return RationalFunction::zero();
            };
            if piv != k {
                a.swap(piv, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let det = RationalFunction::new(a[n - 1][n - 1].clone(), scale);
        if sign {
            -det
        } else {
            det
        }
    }
}

fn lcm_poly(a: &PolyQ, b: &PolyQ) -> PolyQ {
    let g = a.gcd(b);
    a.mul(b).div_exact(&g).expect("gcd divides").monic()
}

/// Binary form `Σ c_i z^(d-i) w^i` of degree `d = coeffs.len() - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryForm<C> {
    pub coeffs: Vec<C>,
}

impl<C: Field> BinaryForm<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "binary form needs at least one coefficient"
        );
        BinaryForm { coeffs }
    }

    pub fn zero(d: usize) -> Self {
        BinaryForm {
            coeffs: vec![C::zero(); d + 1],
        }
    }

    /// `z^(d-i) w^i`.
    pub fn monomial(d: usize, i: usize) -> Self {
        let mut f = Self::zero(d);
        f.coeffs[i] = C::one();
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, z: &C, w: &C) -> C {
        // Homogeneous Horner: ((c0 z + c1 w) z + c2 w^2) ...
        let d = self.degree();
        let mut acc = C::zero();
        let mut wp = C::one();
        let mut zp = vec![C::one(); d + 1];
        for k in 1..=d {
            zp[k] = zp[k - 1].clone() * z.clone();
        }
        for i in 0..=d {
            if !self.coeffs[i].is_zero() {
                acc = acc + self.coeffs[i].clone() * zp[d - i].clone() * wp.clone();
            }
            wp = wp * w.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree(), o.degree());
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.degree() + o.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = BinaryForm {
            coeffs: vec![C::one()],
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `(z, w) ↦ (A(z,w), B(z,w))` for forms `A`, `B` of a common degree.
    pub fn compose(&self, a: &Self, b: &Self) -> Self {
        let d = self.degree();
        let e = a.degree();
        let mut apow = vec![BinaryForm {
            coeffs: vec![C::one()],
        }];
        let mut bpow = vec![BinaryForm {
            coeffs: vec![C::one()],
        }];
        for k in 1..=d {
            apow.push(apow[k - 1].mul(a));
            bpow.push(bpow[k - 1].mul(b));
        }
        let mut out = Self::zero(d * e);
        for i in 0..=d {
            if self.coeffs[i].is_zero() {
                continue;
            }
            out = out.add(&apow[d - i].mul(&bpow[i]).scale(&self.coeffs[i]));
        }
        out
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D) -> BinaryForm<D> {
        BinaryForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl BinaryForm<Rat> {
    /// Dehomogenization `x ↦ F(x, 1)` together with the multiplicity of the
    /// root `(1:0)`.
    pub fn dehomogenize(&self) -> (PolyQ, usize) {
        let d = self.degree();
        let p = PolyQ::new((0..=d).map(|k| self.coeffs[d - k].clone()).collect());
        let inf = d - p.degree().unwrap_or(0);
        (p, inf)
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize) at degree `d`.
    pub fn homogenize(p: &PolyQ, d: usize) -> Self {
        let mut c = vec![Rat::zero(); d + 1];
        for (k, a) in p.coeffs().iter().enumerate() {
            c[d - k] = a.clone();
        }
        BinaryForm { coeffs: c }
    }

    /// Greatest common divisor of two forms, as a primitive integer form whose
    /// first nonzero coefficient is positive. `gcd(f, 0) = f` (normalized).
    pub fn gcd(&self, o: &Self) -> Self {
        let (pa, ia) = self.dehomogenize();
        let (pb, ib) = o.dehomogenize();
        let (g, inf) = match (self.is_zero(), o.is_zero()) {
            (true, true) => panic!("gcd of two zero forms"),
            (true, false) => (pb, ib),
            (false, true) => (pa, ia),
            (false, false) => (pa.gcd(&pb), ia.min(ib)),
        };
        let deg = g.degree().unwrap_or(0) + inf;
        Self::homogenize(&g, deg).primitive()
    }

    /// Primitive integer normalization: coprime integer coefficients, first
    /// nonzero coefficient positive.
    pub fn primitive(&self) -> Self {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * &den).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        if ints
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
        {
            g = -g;
        }
        BinaryForm {
            coeffs: ints.iter().map(|c| Rat::from_integer(c / &g)).collect(),
        }
    }

    /// Exact quotient by a nonzero form dividing `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero(self.degree().checked_sub(o.degree())?));
        }
        let dq = self.degree().checked_sub(o.degree())?;
        let (pa, _) = self.dehomogenize();
        let (pb, _) = o.dehomogenize();
        let q = pa.div_exact(&pb)?;
        let cand = Self::homogenize(&q, dq);
        (cand.mul(o) == *self).then_some(cand)
    }

    /// Content: the positive rational `c` with `self / c` primitive.
    pub fn content(&self) -> Rat {
        let num = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Rat::new(num, den)
    }
}

impl<C: Field> fmt::Display for BinaryForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => pw("z", a),
                (0, b) => pw("w", b),
                (a, b) => format!("{}*{}", pw("z", a), pw("w", b)),
            };
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn pw(v: &str, k: usize) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn f(c: &[i64]) -> BinaryForm<Rat> {
        BinaryForm::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn gcd_of_forms() {
        // z(z+w) and zw share z.
        assert_eq!(f(&[1, 1, 0]).gcd(&f(&[0, 1, 0])), f(&[1, 0]));
        // w^2 and 0.
        assert_eq!(f(&[0, 0, 1]).gcd(&f(&[0, 0, 0])), f(&[0, 0, 1]));
        // -2 w^2 and 4 z w^2 (different degrees).
        assert_eq!(f(&[0, 0, -2]).gcd(&f(&[0, 0, 4, 0])), f(&[0, 0, 1]));
        assert_eq!(f(&[2, 3]).gcd(&f(&[1, 0])), f(&[1]));
    }

    #[test]
    fn composition_and_division() {
        let a = f(&[1, 1, 0]);
        let sq = a.compose(&f(&[1, 0, 0]), &f(&[0, 0, 1]));
        assert_eq!(sq, f(&[1, 0, 1, 0, 0]));
        let prod = f(&[1, 0]).mul(&f(&[1, 1]));
        assert_eq!(prod.div_exact(&f(&[1, 0])), Some(f(&[1, 1])));
        assert_eq!(f(&[1, 1]).div_exact(&f(&[1, 0])), None);
        assert_eq!(a.eval(&int(2), &int(3)), int(10));
    }
}
