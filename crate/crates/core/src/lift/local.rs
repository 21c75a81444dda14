use std::collections::BTreeSet;

use super::form::BinaryForm;
use super::map::{HomogeneousLift, ProjPoint};
use crate::exact::{ord_at, rational_roots, PlaceK, PolyQ, Rat, RationalFunction};
use crate::{Error, Result};

pub type LiftK = HomogeneousLift<RationalFunction>;
pub type PointK = ProjPoint<RationalFunction>;
pub type LiftQ = HomogeneousLift<Rat>;
pub type PointQ = ProjPoint<Rat>;

/// `min ord_γ` over the nonzero coefficients of `F`.
pub fn ord_of_lift(f: &LiftK, g: &PlaceK) -> i64 {
    f.coefficients()
        .map(|c| ord_at(c, g).expect("nonzero"))
        .min()
        .expect("lift has a nonzero coefficient")
}

/// `min ord_γ` over the nonzero coordinates of `A`.
pub fn ord_of_point(a: &PointK, g: &PlaceK) -> i64 {
    [&a.z, &a.w]
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(|c| ord_at(c, g).expect("nonzero"))
        .min()
        .expect("point has a nonzero coordinate")
}

/// `u^k` for the uniformizer `u` at `γ`.
pub fn uniformizer_pow(g: &PlaceK, k: i64) -> RationalFunction {
    g.uniformizer().pow(k as i32)
}

/// `(c·F, c)` with `c` a power of the uniformizer and `ord_γ(c·F) = 0`.
pub fn normalize_at(f: &LiftK, g: &PlaceK) -> (LiftK, RationalFunction) {
    let c = uniformizer_pow(g, -ord_of_lift(f, g));
    (f.scale(&c), c)
}

/// `(b·A, b)` with `b` a power of the uniformizer and `ord_γ(b·A) = 0`.
pub fn normalize_point_at(a: &PointK, g: &PlaceK) -> (PointK, RationalFunction) {
    let b = uniformizer_pow(g, -ord_of_point(a, g));
    (a.scale(&b), b)
}

fn residue(x: &RationalFunction, g: &PlaceK) -> Result<Rat> {
    g.residue(x)
        .ok_or_else(|| Error::NotNormalized(ord_at(x, g).unwrap_or(0)))
}

/// The reduction `F_γ` of a lift normalized at `γ`.
pub fn specialize_lift(f: &LiftK, g: &PlaceK) -> Result<LiftQ> {
    let o = ord_of_lift(f, g);
    if o != 0 {
        return Err(Error::NotNormalized(o));
    }
    let p =
        f.p.coeffs
            .iter()
            .map(|c| residue(c, g))
            .collect::<Result<Vec<_>>>()?;
    let q =
        f.q.coeffs
            .iter()
            .map(|c| residue(c, g))
            .collect::<Result<Vec<_>>>()?;
    HomogeneousLift::new(BinaryForm::new(p), BinaryForm::new(q))
}

/// The reduction `A_γ` of a point normalized at `γ`.
pub fn specialize_point(a: &PointK, g: &PlaceK) -> Result<PointQ> {
    let o = ord_of_point(a, g);
    if o != 0 {
        return Err(Error::NotNormalized(o));
    }
    ProjPoint::new(residue(&a.z, g)?, residue(&a.w, g)?)
}

/// Singular sets `S(F)` and `S(F, A)` restricted to `Q`-rational places.
///
/// `irrational_f` / `irrational_fa` hold the squarefree product of the
/// irreducible factors of degree > 1 whose places would also belong to the
/// respective set; such places are not enumerated.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSets {
    pub s_f: BTreeSet<PlaceK>,
    pub s_fa: BTreeSet<PlaceK>,
    pub irrational_f: Option<PolyQ>,
    pub irrational_fa: Option<PolyQ>,
}

fn gcd_all<'a>(ps: impl Iterator<Item = &'a PolyQ>) -> PolyQ {
    ps.fold(PolyQ::zero(), |acc, p| acc.gcd(p))
}

fn combine_irrational(parts: &[PolyQ]) -> Option<PolyQ> {
    let mut acc = PolyQ::one();
    for p in parts {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let r = rational_roots(p).remainder;
        if r.is_constant() {
            continue;
        }
        let g = acc.gcd(&r);
        acc = acc.mul(&r.div_exact(&g).expect("gcd divides"));
    }
    let acc = acc.squarefree_part();
    (!acc.is_constant()).then_some(acc)
}

pub fn singular_sets(f: &LiftK, a: &PointK) -> Result<SingularSets> {
    let res = f.resultant();
    if res.is_zero() {
        return Err(Error::DegenerateMap);
    }
    let coeffs: Vec<&RationalFunction> = f.coefficients().collect();
    let mut polys: Vec<PolyQ> = vec![res.num().clone(), res.den().clone()];
    polys.extend(
        coeffs
            .iter()
            .flat_map(|c| [c.num().clone(), c.den().clone()]),
    );
    let coords: Vec<&RationalFunction> =
        [&a.z, &a.w].into_iter().filter(|c| !c.is_zero()).collect();
    let mut cand: BTreeSet<PlaceK> = BTreeSet::new();
    cand.insert(PlaceK::Infinity);
    for p in polys
        .iter()
        .chain(coords.iter().flat_map(|c| [c.num(), c.den()]))
    {
        if p.is_constant() {
            continue;
        }
        for (r, _) in rational_roots(p).roots {
            cand.insert(PlaceK::Finite(r));
        }
    }
    let mut s_f = BTreeSet::new();
    let mut s_fa = BTreeSet::new();
    for g in cand {
        let in_f = ord_of_lift(f, &g) != 0 || ord_at(&res, &g)? != 0;
        let in_fa = in_f || ord_of_point(a, &g) != 0;
        if in_f {
            s_f.insert(g.clone());
        }
        if in_fa {
            s_fa.insert(g);
        }
    }
    let mut f_parts = vec![
        res.num().clone(),
        res.den().clone(),
        gcd_all(coeffs.iter().map(|c| c.num())),
    ];
    f_parts.extend(coeffs.iter().map(|c| c.den().clone()));
    let mut fa_parts = f_parts.clone();
    fa_parts.push(gcd_all(coords.iter().map(|c| c.num())));
    fa_parts.extend(coords.iter().map(|c| c.den().clone()));
    Ok(SingularSets {
        s_f,
        s_fa,
        irrational_f: combine_irrational(&f_parts),
        irrational_fa: combine_irrational(&fa_parts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyQ::from_ints(c))
    }

    #[test]
    fn orders_and_normalization() {
        let f: LiftK = HomogeneousLift::new(
            BinaryForm::new(vec![rf(&[0, 1]), rf(&[]), rf(&[1])]),
            BinaryForm::new(vec![rf(&[]), rf(&[]), rf(&[0, 1])]),
        )
        .unwrap();
        assert_eq!(ord_of_lift(&f, &PlaceK::zero()), 0);
        assert_eq!(ord_of_lift(&f, &PlaceK::Infinity), -1);
        let (fn_, c) = normalize_at(&f, &PlaceK::Infinity);
        assert_eq!(c, RationalFunction::t().inv());
        assert_eq!(ord_of_lift(&fn_, &PlaceK::Infinity), 0);
        let a = ProjPoint::new(rf(&[0, 1]), rf(&[0, 0, 1])).unwrap();
        let (an, b) = normalize_point_at(&a, &PlaceK::zero());
        assert_eq!(b, RationalFunction::t().inv());
        assert_eq!(an, ProjPoint::new(rf(&[1]), rf(&[0, 1])).unwrap());
        let s = specialize_lift(&f, &PlaceK::zero()).unwrap();
        assert_eq!(s.p.coeffs, vec![int(0), int(0), int(1)]);
        assert!(matches!(
            specialize_lift(&f, &PlaceK::Infinity),
            Err(Error::NotNormalized(-1))
        ));
    }

    #[test]
    fn singular_sets_with_irrational_factor() {
        // F = (z^2, (t^2 + 1) w^2): resultant (t^2+1)^2.
        let f: LiftK = HomogeneousLift::new(
            BinaryForm::new(vec![rf(&[1]), rf(&[]), rf(&[])]),
            BinaryForm::new(vec![rf(&[]), rf(&[]), rf(&[1, 0, 1])]),
        )
        .unwrap();
        let a = ProjPoint::new(rf(&[0, 1]), rf(&[0, 0, 1])).unwrap();
        let s = singular_sets(&f, &a).unwrap();
        assert_eq!(s.s_f, [PlaceK::Infinity].into_iter().collect());
        assert_eq!(
            s.s_fa,
            [PlaceK::zero(), PlaceK::Infinity].into_iter().collect()
        );
        assert_eq!(s.irrational_f, Some(PolyQ::from_ints(&[1, 0, 1])));
    }
}
