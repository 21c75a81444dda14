use std::fmt;

use num_traits::{One, Zero};

use super::form::{BinaryForm, Field};
use crate::exact::Rat;
use crate::{Error, Result};

/// A pair `(z, w)`, not both zero, representing a point of `P¹`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint<C> {
    pub z: C,
    pub w: C,
}

impl<C: Field> ProjPoint<C> {
    pub fn new(z: C, w: C) -> Result<Self> {
        if z.is_zero() && w.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(ProjPoint { z, w })
    }

    /// `(x : 1)`.
    pub fn affine(x: C) -> Self {
        ProjPoint { z: x, w: C::one() }
    }

    /// `(1 : 0)`.
    pub fn infinity() -> Self {
        ProjPoint {
            z: C::one(),
            w: C::zero(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        ProjPoint {
            z: self.z.clone() * c.clone(),
            w: self.w.clone() * c.clone(),
        }
    }

    /// Same point of `P¹`.
    pub fn proj_eq(&self, o: &Self) -> bool {
        self.z.clone() * o.w.clone() == self.w.clone() * o.z.clone()
    }

    /// Divides by [`Field::pair_content`], returning the removed content.
    pub fn primitive(&self) -> (Self, C) {
        let c = C::pair_content(&self.z, &self.w);
        (
            ProjPoint {
                z: self.z.clone() / c.clone(),
                w: self.w.clone() / c.clone(),
            },
            c,
        )
    }

    /// `z/w`, or `None` at infinity.
    pub fn ratio(&self) -> Option<C> {
        (!self.w.is_zero()).then(|| self.z.clone() / self.w.clone())
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D) -> ProjPoint<D> {
        ProjPoint {
            z: f(&self.z),
            w: f(&self.w),
        }
    }
}

impl<C: Field> fmt::Display for ProjPoint<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.z, self.w)
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` acting by `(z, w) ↦ (az + bw, cz + dw)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2<C> {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl<C: Field> Mat2<C> {
    pub fn new(a: C, b: C, c: C, d: C) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2 {
            a: C::one(),
            b: C::zero(),
            c: C::zero(),
            d: C::one(),
        }
    }

    pub fn det(&self) -> C {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// `[[d, -b], [-c, a]]`, the inverse up to the scalar `det`.
    pub fn adjugate(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let adj = self.adjugate();
        Some(Mat2 {
            a: adj.a / det.clone(),
            b: adj.b / det.clone(),
            c: adj.c / det.clone(),
            d: adj.d / det,
        })
    }

    pub fn apply(&self, p: &ProjPoint<C>) -> ProjPoint<C> {
        ProjPoint {
            z: self.a.clone() * p.z.clone() + self.b.clone() * p.w.clone(),
            w: self.c.clone() * p.z.clone() + self.d.clone() * p.w.clone(),
        }
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D) -> Mat2<D> {
        Mat2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }
}

/// A homogeneous lift `F = (P, Q)` of a rational map of degree `d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HomogeneousLift<C> {
    pub p: BinaryForm<C>,
    pub q: BinaryForm<C>,
}

impl<C: Field> HomogeneousLift<C> {
    pub fn new(p: BinaryForm<C>, q: BinaryForm<C>) -> Result<Self> {
        if p.degree() != q.degree() {
            return Err(Error::InvalidInput("forms of different degrees".into()));
        }
        if p.is_zero() && q.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(HomogeneousLift { p, q })
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    /// Nonzero coefficients of both forms.
    pub fn coefficients(&self) -> impl Iterator<Item = &C> {
        self.p
            .coeffs
            .iter()
            .chain(&self.q.coeffs)
            .filter(|c| !c.is_zero())
    }

    /// `F(A)` as a raw vector (may be `(0, 0)`).
    pub fn apply_raw(&self, a: &ProjPoint<C>) -> (C, C) {
        (self.p.eval(&a.z, &a.w), self.q.eval(&a.z, &a.w))
    }

    pub fn apply(&self, a: &ProjPoint<C>) -> Result<ProjPoint<C>> {
        let (z, w) = self.apply_raw(a);
        ProjPoint::new(z, w)
    }

    pub fn scale(&self, c: &C) -> Self {
        HomogeneousLift {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        HomogeneousLift {
            p: self.p.compose(&other.p, &other.q),
            q: self.q.compose(&other.p, &other.q),
        }
    }

    /// `F^n`, with `F^0` the identity lift `(z, w)`.
    pub fn iterate(&self, n: usize) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn identity() -> Self {
        HomogeneousLift {
            p: BinaryForm::monomial(1, 0),
            q: BinaryForm::monomial(1, 1),
        }
    }

    /// Post-composition with a linear map: `B ∘ F`.
    pub fn left_mul(&self, b: &Mat2<C>) -> Self {
        HomogeneousLift {
            p: self.p.scale(&b.a).add(&self.q.scale(&b.b)),
            q: self.p.scale(&b.c).add(&self.q.scale(&b.d)),
        }
    }

    /// Pre-composition with a linear map: `F ∘ B`.
    pub fn right_mul(&self, b: &Mat2<C>) -> Self {
        let lz = BinaryForm::new(vec![b.a.clone(), b.b.clone()]);
        let lw = BinaryForm::new(vec![b.c.clone(), b.d.clone()]);
        HomogeneousLift {
            p: self.p.compose(&lz, &lw),
            q: self.q.compose(&lz, &lw),
        }
    }

    /// The lift `B ∘ F ∘ B⁻¹` of `B f B⁻¹`, using the true inverse.
    pub fn conjugate(&self, b: &Mat2<C>) -> Result<Self> {
        let inv = b.inverse().ok_or(Error::DegenerateMap)?;
        Ok(self.right_mul(&inv).left_mul(b))
    }

    /// Sylvester resultant of `P` and `Q`.
    pub fn resultant(&self) -> C {
        let d = self.degree();
        let n = 2 * d;
        let mut m = vec![vec![C::zero(); n]; n];
        for k in 0..d {
            for i in 0..=d {
                m[k][k + i] = self.p.coeffs[i].clone();
                m[d + k][k + i] = self.q.coeffs[i].clone();
            }
        }
        C::determinant(m)
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D + Copy) -> HomogeneousLift<D> {
        HomogeneousLift {
            p: self.p.map(f),
            q: self.q.map(f),
        }
    }
}

impl<C: Field> fmt::Display for HomogeneousLift<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Determinant by Gaussian elimination over a field.
pub fn determinant<C: Field>(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut det = C::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return C::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[r][c].clone() - f.clone() * m[col][c].clone();
                m[r][c] = v;
            }
        }
    }
    det
}

/// Solves `M x = b` for square invertible `M`; `None` if singular.
pub fn solve<C: Field>(mut m: Vec<Vec<C>>, mut b: Vec<C>) -> Option<Vec<C>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(piv, col);
        b.swap(piv, col);
        let pv = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[r][c].clone() - f.clone() * m[col][c].clone();
                m[r][c] = v;
            }
            let v = b[r].clone() - f * b[col].clone();
            b[r] = v;
        }
    }
    Some((0..n).map(|i| b[i].clone() / m[i][i].clone()).collect())
}

/// Forms `G1, G2, H1, H2` of degree `d - 1` with
/// `G1·P + G2·Q = Res·z^(2d-1)` and `H1·P + H2·Q = Res·w^(2d-1)`.
#[derive(Clone, Debug)]
pub struct Nullstellensatz<C> {
    pub g1: BinaryForm<C>,
    pub g2: BinaryForm<C>,
    pub h1: BinaryForm<C>,
    pub h2: BinaryForm<C>,
    pub res: C,
}

impl<C: Field> HomogeneousLift<C> {
    pub fn nullstellensatz(&self) -> Result<Nullstellensatz<C>> {
        let d = self.degree();
        let n = 2 * d;
        let res = self.resultant();
        if res.is_zero() {
            return Err(Error::DegenerateMap);
        }
        // Column j < d: coefficient g1_j, column d + j: g2_j.
        // Row m: coefficient of z^(2d-1-m) w^m in G1 P + G2 Q.
        let mut mat = vec![vec![C::zero(); n]; n];
        for j in 0..d {
            for i in 0..=d {
                mat[i + j][j] = self.p.coeffs[i].clone();
                mat[i + j][d + j] = self.q.coeffs[i].clone();
            }
        }
        let mut e0 = vec![C::zero(); n];
        e0[0] = res.clone();
        let mut e1 = vec![C::zero(); n];
        e1[n - 1] = res.clone();
        let x = solve(mat.clone(), e0).ok_or(Error::DegenerateMap)?;
        let y = solve(mat, e1).ok_or(Error::DegenerateMap)?;
        let form = |v: &[C]| BinaryForm::new(v.to_vec());
        Ok(Nullstellensatz {
            g1: form(&x[..d]),
            g2: form(&x[d..]),
            h1: form(&y[..d]),
            h2: form(&y[d..]),
            res,
        })
    }
}

impl HomogeneousLift<Rat> {
    /// The integer lift `λ·F` with coprime integer coefficients, and `λ`.
    pub fn to_integral(&self) -> (Self, Rat) {
        let coeffs: Vec<Rat> = self
            .p
            .coeffs
            .iter()
            .chain(&self.q.coeffs)
            .cloned()
            .collect();
        let all = BinaryForm::new(coeffs);
        let c = all.content();
        let lam = Rat::one() / c;
        (self.scale(&lam), lam)
    }

    /// Largest absolute value among coefficients of both forms.
    pub fn max_abs_coefficient(&self) -> Rat {
        self.coefficients()
            .map(num_traits::Signed::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, PolyQ, RationalFunction};

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyQ::from_ints(c))
    }

    fn lift(
        p: Vec<RationalFunction>,
        q: Vec<RationalFunction>,
    ) -> HomogeneousLift<RationalFunction> {
        HomogeneousLift::new(BinaryForm::new(p), BinaryForm::new(q)).unwrap()
    }

    #[test]
    fn resultants() {
        let sq = lift(
            vec![rf(&[1]), rf(&[]), rf(&[])],
            vec![rf(&[]), rf(&[]), rf(&[1])],
        );
        assert_eq!(sq.resultant(), rf(&[1]));
        let qa = lift(
            vec![rf(&[1]), rf(&[1]), rf(&[])],
            vec![rf(&[]), rf(&[1]), rf(&[0, 1])],
        );
        assert_eq!(qa.resultant(), rf(&[0, -1, 1]));
        let ex = lift(
            vec![rf(&[0, 1]), rf(&[]), rf(&[1])],
            vec![rf(&[]), rf(&[]), rf(&[0, 1])],
        );
        assert_eq!(ex.resultant(), rf(&[0, 0, 0, 0, 1]));
    }

    #[test]
    fn nullstellensatz_identity() {
        let f: HomogeneousLift<Rat> = HomogeneousLift::new(
            BinaryForm::new(vec![int(1), int(1), int(0)]),
            BinaryForm::new(vec![int(0), int(1), int(2)]),
        )
        .unwrap();
        let ns = f.nullstellensatz().unwrap();
        let lhs = ns.g1.mul(&f.p).add(&ns.g2.mul(&f.q));
        let mut rhs = BinaryForm::zero(3);
        rhs.coeffs[0] = ns.res.clone();
        assert_eq!(lhs, rhs);
        let lhs = ns.h1.mul(&f.p).add(&ns.h2.mul(&f.q));
        let mut rhs = BinaryForm::zero(3);
        rhs.coeffs[3] = ns.res.clone();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_matches_pointwise() {
        let f: HomogeneousLift<Rat> = HomogeneousLift::new(
            BinaryForm::new(vec![int(1), int(1), int(0)]),
            BinaryForm::new(vec![int(0), int(1), int(2)]),
        )
        .unwrap();
        let b = Mat2::new(int(2), int(1), int(0), int(1));
        let g = f.conjugate(&b).unwrap();
        let x = ProjPoint::affine(int(3));
        let lhs = g.apply(&b.apply(&x)).unwrap();
        let rhs = b.apply(&f.apply(&x).unwrap());
        assert!(lhs.proj_eq(&rhs));
        let f2 = f.iterate(2);
        assert!(f2
            .apply(&x)
            .unwrap()
            .proj_eq(&f.apply(&f.apply(&x).unwrap()).unwrap()));
    }
}
