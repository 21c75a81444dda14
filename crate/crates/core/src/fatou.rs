//! Hole-avoidance at a place and a bounded search for coordinate changes that
//! make a pair hole-avoiding.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact::{PlaceK, Rat, RationalFunction};
use crate::lift::{
    hole_factorization, normalize_at, normalize_point_at, ord_of_lift, ord_of_point,
    specialize_lift, specialize_point, BinaryForm, HoleFactorization, LiftK, LiftQ, Mat2, PointK,
    PointQ, ProjPoint,
};
use crate::{Error, Result};

/// Why a pair was certified hole-avoiding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum AvoidanceReason {
    /// `Res(F_γ) ≠ 0`: there are no holes.
    NoHoles,
    /// The projective orbit of `A_γ` under `F̂` is eventually periodic and the
    /// cycle (with its preperiod) misses every hole.
    Cycle { start: usize, period: usize },
    /// `F̂` is a parabolic Möbius map; the orbit is an arithmetic progression
    /// in a coordinate where the fixed point is at infinity.
    Parabolic,
    /// `F̂` is a Möbius map with two rational fixed points; the orbit is a
    /// geometric progression in a coordinate where they sit at 0 and infinity.
    RationalMultiplier,
    /// From iterate `at` on, the naive height of the orbit exceeds every hole's
    /// height and grows strictly.
    HeightEscape { at: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum HoleAvoidanceVerdict {
    HoleAvoiding {
        reason: AvoidanceReason,
    },
    /// `F_γ^hit_at(A_γ) = (0, 0)`.
    NotHoleAvoiding {
        hit_at: usize,
    },
    Undetermined {
        iterations: usize,
        reason: String,
    },
}

impl HoleAvoidanceVerdict {
    pub fn is_hole_avoiding(&self) -> bool {
        matches!(self, HoleAvoidanceVerdict::HoleAvoiding { .. })
    }
}

fn avoiding(reason: AvoidanceReason) -> HoleAvoidanceVerdict {
    HoleAvoidanceVerdict::HoleAvoiding { reason }
}

/// Decides whether `F_γ^n(A_γ) ≠ (0, 0)` for all `n`, for lifts already
/// normalized at `γ`.
pub fn check_hole_avoiding(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    max_iter: usize,
) -> Result<HoleAvoidanceVerdict> {
    let of = ord_of_lift(f, g);
    if of != 0 {
        return Err(Error::NotNormalized(of));
    }
    let oa = ord_of_point(a, g);
    if oa != 0 {
        return Err(Error::NotNormalized(oa));
    }
    let fg = specialize_lift(f, g)?;
    let ag = specialize_point(a, g)?;
    Ok(check_specialized(&fg, &ag, max_iter))
}

/// [`check_hole_avoiding`] after normalizing both lifts at `γ`.
pub fn check_hole_avoiding_any_lift(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    max_iter: usize,
) -> Result<HoleAvoidanceVerdict> {
    let (fn_, _) = normalize_at(f, g);
    let (an, _) = normalize_point_at(a, g);
    check_hole_avoiding(&fn_, &an, g, max_iter)
}

/// Hole-avoidance of a specialized pair over `Q`.
pub fn check_specialized(fg: &LiftQ, ag: &PointQ, max_iter: usize) -> HoleAvoidanceVerdict {
    if !fg.resultant().is_zero() {
        return avoiding(AvoidanceReason::NoHoles);
    }
    let hf = hole_factorization(fg);
    let ell = hf.ell();
    let is_hole = |x: &PointQ| hf.h.eval(&x.z, &x.w).is_zero();

    if ell == 1 && !is_hole(ag) {
        let m = Mat2::new(
            hf.fhat.p.coeffs[0].clone(),
            hf.fhat.p.coeffs[1].clone(),
            hf.fhat.q.coeffs[0].clone(),
            hf.fhat.q.coeffs[1].clone(),
        );
        if let Some(v) = mobius_verdict(&m, ag, &hf.holes) {
            return v;
        }
    }
    let escape = if ell >= 2 {
        EscapeBound::new(&hf)
    } else {
        None
    };

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut x = primitive_proj(ag);
    for i in 0..max_iter {
        if is_hole(&x) {
            return HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: i + 1 };
        }
        let key = (x.z.to_integer(), x.w.to_integer());
        if let Some(&j) = seen.get(&key) {
            return avoiding(AvoidanceReason::Cycle {
                start: j,
                period: i - j,
            });
        }
        if let Some(b) = &escape {
            if b.escapes(&x) {
                return avoiding(AvoidanceReason::HeightEscape { at: i });
            }
        }
        seen.insert(key, i);
        let (z, w) = hf.fhat.apply_raw(&x);
        x = primitive_proj(&ProjPoint { z, w });
    }
    let reason = if hf.irrational.is_some() {
        "orbit undecided; holes include irrational points".to_string()
    } else {
        "no cycle or escape detected".to_string()
    };
    HoleAvoidanceVerdict::Undetermined {
        iterations: max_iter,
        reason,
    }
}

/// Coprime integer coordinates with the first nonzero one positive.
pub(crate) fn primitive_proj(x: &PointQ) -> PointQ {
    let (p, _) = x.primitive();
    let neg = if p.z.is_zero() {
        p.w.is_negative()
    } else {
        p.z.is_negative()
    };
    if neg {
        ProjPoint { z: -p.z, w: -p.w }
    } else {
        p
    }
}

fn height(x: &PointQ) -> BigInt {
    let p = primitive_proj(x);
    p.z.to_integer().abs().max(p.w.to_integer().abs())
}

/// Certified height-growth test for `deg F̂ ≥ 2`: with `F̂` scaled to integer
/// coefficients, `H(F̂(x)) ≥ H(x)^ℓ / C` for primitive integer `x`.
struct EscapeBound {
    ell: u32,
    c: Rat,
    hole_height: BigInt,
}

impl EscapeBound {
    fn new(hf: &HoleFactorization) -> Option<Self> {
        let (fi, _) = hf.fhat.to_integral();
        let ns = fi.nullstellensatz().ok()?;
        let l1 = |f: &BinaryForm<Rat>| f.coeffs.iter().fold(Rat::zero(), |acc, c| acc + c.abs());
        let m = (l1(&ns.g1) + l1(&ns.g2)).max(l1(&ns.h1) + l1(&ns.h2));
        let kappa = [&ns.g1, &ns.g2, &ns.h1, &ns.h2]
            .iter()
            .flat_map(|f| f.coeffs.iter())
            .fold(BigInt::one(), |acc, c| {
                num_integer::Integer::lcm(&acc, c.denom())
            });
        let hole_height = hf
            .holes
            .iter()
            .map(height)
            .max()
            .unwrap_or_else(BigInt::zero);
        Some(EscapeBound {
            ell: fi.degree() as u32,
            c: m * Rat::from_integer(kappa),
            hole_height,
        })
    }

    fn escapes(&self, x: &PointQ) -> bool {
        let h = height(x);
        h > self.hole_height
            && Rat::from_integer(num_traits::pow(h, (self.ell - 1) as usize)) > self.c
    }
}

fn mat_mul(x: &Mat2<Rat>, y: &Mat2<Rat>) -> Mat2<Rat> {
    Mat2::new(
        &x.a * &y.a + &x.b * &y.c,
        &x.a * &y.b + &x.b * &y.d,
        &x.c * &y.a + &x.d * &y.c,
        &x.c * &y.b + &x.d * &y.d,
    )
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

/// `x ↦ (x - p)/(x - q)` sending `p ↦ 0` and `q ↦ ∞`, as a matrix; `None`
/// stands for the point at infinity.
fn moving(p: Option<&Rat>, q: Option<&Rat>) -> Mat2<Rat> {
    let one = Rat::one;
    let zero = Rat::zero;
    match (p, q) {
        (Some(p), Some(q)) => Mat2::new(one(), -p.clone(), one(), -q.clone()),
        (Some(p), None) => Mat2::new(one(), -p.clone(), zero(), one()),
        (None, Some(q)) => Mat2::new(zero(), one(), one(), -q.clone()),
        (None, None) => unreachable!("distinct points"),
    }
}

fn affine_of(x: &PointQ) -> Option<Rat> {
    x.ratio()
}

/// Exact decision for a Möbius `F̂` with a parabolic or rational-multiplier
/// normal form. `None` when the fixed points are irrational or `M` is scalar.
fn mobius_verdict(m: &Mat2<Rat>, a: &PointQ, holes: &[PointQ]) -> Option<HoleAvoidanceVerdict> {
    if m.b.is_zero() && m.c.is_zero() && m.a == m.d {
        return None;
    }
    // Fixed points: c x^2 + (d - a) x - b = 0, plus ∞ when c = 0.
    let tr = &m.a + &m.d;
    let disc = &tr * &tr - Rat::from_integer(4.into()) * m.det();
    let fixed: Vec<Option<Rat>> = if m.c.is_zero() {
        let mut v = vec![None];
        if m.a != m.d {
            v.push(Some(&m.b / (&m.d - &m.a)));
        }
        v
    } else {
        let s = rat_sqrt(&disc)?;
        let two_c = Rat::from_integer(2.into()) * &m.c;
        let base = &m.a - &m.d;
        let r1 = (&base + &s) / &two_c;
        let r2 = (&base - &s) / &two_c;
        if r1 == r2 {
            vec![Some(r1)]
        } else {
            vec![Some(r1), Some(r2)]
        }
    };
    let hits = |n: usize| HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: n + 1 };
    if fixed.len() == 1 {
        // Parabolic: conjugate the fixed point to ∞; then y ↦ y + β.
        let t = match &fixed[0] {
            None => Mat2::identity(),
            Some(p) => Mat2::new(Rat::zero(), Rat::one(), Rat::one(), -p.clone()),
        };
        let tinv = t.inverse().expect("invertible");
        let n = mat_mul(&mat_mul(&t, m), &tinv);
        let beta = &n.b / &n.d;
        let y0 = affine_of(&t.apply(a));
        let mut best: Option<usize> = None;
        for h in holes {
            let yh = affine_of(&t.apply(h));
            let step = match (&y0, &yh) {
                (Some(y0), Some(yh)) => {
                    let k = (yh - y0) / &beta;
                    (k.is_integer() && !k.is_negative()).then(|| k.to_integer())
                }
                // Orbit starts at the fixed point (which is not a hole) or the
                // hole is the fixed point (never reached from elsewhere).
                _ => None,
            };
            if let Some(k) = step {
                let k: usize = k.try_into().ok()?;
                best = Some(best.map_or(k, |b| b.min(k)));
            }
        }
        return Some(match best {
            Some(k) => hits(k),
            None => avoiding(AvoidanceReason::Parabolic),
        });
    }
    // Two rational fixed points p, q: y ↦ λ y.
    let t = moving(fixed[0].as_ref(), fixed[1].as_ref());
    let tinv = t.inverse().expect("invertible");
    let n = mat_mul(&mat_mul(&t, m), &tinv);
    let lambda = &n.a / &n.d;
    let y0 = affine_of(&t.apply(a));
    let mut best: Option<usize> = None;
    for h in holes {
        let yh = affine_of(&t.apply(h));
        let (Some(y0), Some(yh)) = (&y0, &yh) else {
            continue;
        };
        if y0.is_zero() || yh.is_zero() {
            continue;
        }
        if let Some(k) = power_index(&lambda, &(yh / y0)) {
            best = Some(best.map_or(k, |b| b.min(k)));
        }
    }
    Some(match best {
        Some(k) => hits(k),
        None => avoiding(AvoidanceReason::RationalMultiplier),
    })
}

/// Least `n ≥ 0` with `λ^n = r`, for rational `λ ≠ 0, 1`.
fn power_index(lambda: &Rat, r: &Rat) -> Option<usize> {
    if r.is_one() {
        return Some(0);
    }
    if lambda.abs().is_one() {
        // λ = -1.
        return (*r == -Rat::one()).then_some(1);
    }
    let grows = lambda.abs() > Rat::one();
    let mut acc = Rat::one();
    for n in 1.. {
        acc = &acc * lambda;
        if acc == *r {
            return Some(n);
        }
        let past = if grows {
            acc.abs() > r.abs()
        } else {
            acc.abs() < r.abs()
        };
        if past {
            return None;
        }
    }
    None
}

/// Search limits for [`search_fatou_certificate`].
#[derive(Clone, Debug)]
pub struct CertificateBudget {
    pub max_n: usize,
    pub max_m: usize,
    /// Scalings `z ↦ u^j z` for `1 ≤ |j| ≤ max_scaling`.
    pub max_scaling: i64,
    /// Translations `z ↦ z + q` for `q = a/b`, `|a|, |b| ≤ translation_height`, `q ≠ 0`.
    pub translation_height: i64,
    pub inversion: bool,
    pub extra: Vec<Mat2<RationalFunction>>,
    /// Iteration cap passed to the hole-avoidance check.
    pub max_iter: usize,
}

impl Default for CertificateBudget {
    fn default() -> Self {
        CertificateBudget {
            max_n: 2,
            max_m: 2,
            max_scaling: 2,
            translation_height: 1,
            inversion: true,
            extra: Vec::new(),
            max_iter: 200,
        }
    }
}

/// A coordinate change `B` and iterates with `(B F^n B⁻¹, B(F^m(A)))`
/// hole-avoiding at `γ`.
#[derive(Clone, Debug)]
pub struct FatouCertificate {
    pub b: Mat2<RationalFunction>,
    pub label: String,
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub verdict: HoleAvoidanceVerdict,
}

/// The candidate dictionary, in enumeration order.
pub fn candidate_matrices(
    g: &PlaceK,
    budget: &CertificateBudget,
) -> Vec<(String, Mat2<RationalFunction>)> {
    let rf = |r: Rat| RationalFunction::constant(r);
    let one = || RationalFunction::one();
    let zero = || RationalFunction::zero();
    let mut out = vec![("identity".to_string(), Mat2::identity())];
    let u = g.uniformizer();
    for k in 1..=budget.max_scaling {
        for j in [k, -k] {
            out.push((
                format!("z -> u^{j} z"),
                Mat2::new(u.pow(j as i32), zero(), zero(), one()),
            ));
        }
    }
    let h = budget.translation_height;
    let mut qs: Vec<Rat> = Vec::new();
    for b in 1..=h {
        for a in -h..=h {
            let q = Rat::new(a.into(), b.into());
            if !q.is_zero() && !qs.contains(&q) {
                qs.push(q);
            }
        }
    }
    qs.sort_by(|x, y| {
        let hx = x.numer().abs().max(x.denom().clone());
        let hy = y.numer().abs().max(y.denom().clone());
        hx.cmp(&hy).then(x.cmp(y))
    });
    for q in qs {
        out.push((
            format!("z -> z + {q}"),
            Mat2::new(one(), rf(q), zero(), one()),
        ));
    }
    if budget.inversion {
        out.push((
            "z -> 1/z".to_string(),
            Mat2::new(zero(), one(), one(), zero()),
        ));
    }
    for (i, b) in budget.extra.iter().enumerate() {
        out.push((format!("user[{i}]"), b.clone()));
    }
    out
}

/// The transformed pair `(B F^n B⁻¹, B(F^m(A)))`, normalized at `γ`.
pub fn transformed_pair(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    b: &Mat2<RationalFunction>,
    n: usize,
    m: usize,
) -> Result<(LiftK, PointK)> {
    let fnn = f.iterate(n).conjugate(b)?;
    let mut pt = a.clone();
    for _ in 0..m {
        pt = f.apply(&pt)?;
    }
    let pt = b.apply(&pt);
    let pt = ProjPoint::new(pt.z, pt.w)?;
    let (fnn, _) = normalize_at(&fnn, g);
    let (pt, _) = normalize_point_at(&pt, g);
    Ok((fnn, pt))
}

/// First `(n, m, dictionary index)` in lexicographic order whose transformed
/// pair is certified hole-avoiding; `None` when the budget is exhausted.
pub fn search_fatou_certificate(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    budget: &CertificateBudget,
) -> Option<FatouCertificate> {
    let dict = candidate_matrices(g, budget);
    for n in 1..=budget.max_n.max(1) {
        for m in 0..=budget.max_m {
            for (index, (label, b)) in dict.iter().enumerate() {
                let Ok((fp, ap)) = transformed_pair(f, a, g, b, n, m) else {
                    continue;
                };
                let Ok(verdict) = check_hole_avoiding(&fp, &ap, g, budget.max_iter) else {
                    continue;
                };
                if verdict.is_hole_avoiding() {
                    return Some(FatouCertificate {
                        b: b.clone(),
                        label: label.clone(),
                        index,
                        n,
                        m,
                        verdict,
                    });
                }
            }
        }
    }
    None
}

/// Re-checks a certificate from scratch.
pub fn verify_certificate(
    f: &LiftK,
    a: &PointK,
    g: &PlaceK,
    cert: &FatouCertificate,
    max_iter: usize,
) -> Result<bool> {
    let (fp, ap) = transformed_pair(f, a, g, &cert.b, cert.n, cert.m)?;
    Ok(check_hole_avoiding(&fp, &ap, g, max_iter)?.is_hole_avoiding())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, PolyQ};
    use crate::lift::HomogeneousLift;

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyQ::from_ints(c))
    }

    fn lift(p: &[&[i64]], q: &[&[i64]]) -> LiftK {
        HomogeneousLift::new(
            BinaryForm::new(p.iter().map(|c| rf(c)).collect()),
            BinaryForm::new(q.iter().map(|c| rf(c)).collect()),
        )
        .unwrap()
    }

    fn lq(p: &[i64], q: &[i64]) -> LiftQ {
        HomogeneousLift::new(
            BinaryForm::new(p.iter().map(|&x| int(x)).collect()),
            BinaryForm::new(q.iter().map(|&x| int(x)).collect()),
        )
        .unwrap()
    }

    fn pq(z: i64, w: i64) -> PointQ {
        ProjPoint::new(int(z), int(w)).unwrap()
    }

    #[test]
    fn translation_example() {
        // z(z - w), (z - t w) w at t = 0.
        let f = lift(&[&[1], &[-1], &[]], &[&[], &[1], &[0, -1]]);
        let g = PlaceK::zero();
        for a0 in -3..=6 {
            let a = ProjPoint::new(rf(&[a0, 1]), rf(&[1])).unwrap();
            let v = check_hole_avoiding(&f, &a, &g, 50).unwrap();
            if a0 >= 0 {
                assert_eq!(
                    v,
                    HoleAvoidanceVerdict::NotHoleAvoiding {
                        hit_at: a0 as usize + 1
                    },
                    "a0 = {a0}"
                );
            } else {
                assert!(v.is_hole_avoiding(), "a0 = {a0}: {v:?}");
            }
        }
    }

    #[test]
    fn constant_reduction_kills_everything() {
        let f = lift(&[&[0, 1], &[], &[1]], &[&[], &[], &[0, 1]]);
        let g = PlaceK::zero();
        for a0 in [-2, 0, 1, 5] {
            let a = ProjPoint::new(rf(&[a0]), rf(&[1])).unwrap();
            let v = check_hole_avoiding(&f, &a, &g, 10).unwrap();
            assert_eq!(v, HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: 2 });
        }
        let inf = ProjPoint::new(rf(&[1]), rf(&[])).unwrap();
        assert_eq!(
            check_hole_avoiding(&f, &inf, &g, 10).unwrap(),
            HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: 1 }
        );
    }

    #[test]
    fn rational_multiplier() {
        // F = z·(2z, w): f̂(x) = 2x, hole at 0 (fixed) and holes elsewhere.
        let f = lq(&[2, 0, 0], &[0, 1, 0]);
        assert!(check_specialized(&f, &pq(3, 1), 10).is_hole_avoiding());
        // (z - 8w)·(2z, w): hole at 8, orbit 1, 2, 4, 8.
        let f = lq(&[2, -16, 0], &[0, 1, -8]);
        assert_eq!(
            check_specialized(&f, &pq(1, 1), 1),
            HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: 4 }
        );
        assert_eq!(
            check_specialized(&f, &pq(3, 1), 1),
            avoiding(AvoidanceReason::RationalMultiplier)
        );
    }

    #[test]
    fn cycles_and_escape() {
        // (z - 5w)·(z^2, w^2)
        let f = lq(&[1, -5, 0, 0], &[0, 0, 1, -5]);
        assert!(matches!(
            check_specialized(&f, &pq(1, 1), 10),
            HoleAvoidanceVerdict::HoleAvoiding {
                reason: AvoidanceReason::Cycle { .. }
            }
        ));
        assert!(matches!(
            check_specialized(&f, &pq(3, 1), 10),
            HoleAvoidanceVerdict::HoleAvoiding {
                reason: AvoidanceReason::HeightEscape { .. }
            }
        ));
        assert!(
            check_specialized(&f, &pq(5, 1), 10)
                == HoleAvoidanceVerdict::NotHoleAvoiding { hit_at: 1 }
        );
    }

    #[test]
    fn certificate_for_quasi_adelic_at_infinity() {
        let f = lift(&[&[1], &[1], &[]], &[&[], &[1], &[0, 1]]);
        let a = ProjPoint::new(rf(&[1]), rf(&[1])).unwrap();
        let g = PlaceK::Infinity;
        let c = search_fatou_certificate(&f, &a, &g, &CertificateBudget::default()).unwrap();
        assert_eq!((c.index, c.n, c.m), (0, 1, 0));
        assert!(verify_certificate(&f, &a, &g, &c, 50).unwrap());
    }
}
