use num_traits::Zero;

use super::form::BinaryForm;
use super::local::{LiftQ, PointQ};
use super::map::{HomogeneousLift, ProjPoint};
use crate::exact::{rational_roots, PolyQ, Rat};

/// Factorization `F_γ = H · F̂` of a specialized lift.
///
/// `H` is a primitive integer form with positive first nonzero coefficient;
/// `F̂` has degree `ℓ = d - deg H` and, when `ℓ ≥ 1`, nonzero resultant.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleFactorization {
    pub h: BinaryForm<Rat>,
    pub fhat: LiftQ,
    /// `Q`-rational projective roots of `H`, finite ones in increasing order,
    /// then `(1:0)`.
    pub holes: Vec<PointQ>,
    /// Product of the irreducible factors of `H` of degree > 1, if any.
    pub irrational: Option<PolyQ>,
}

impl HoleFactorization {
    pub fn ell(&self) -> usize {
        self.fhat.degree()
    }

    pub fn has_holes(&self) -> bool {
        self.h.degree() > 0
    }
}

pub fn hole_factorization(f: &LiftQ) -> HoleFactorization {
    if !f.resultant().is_zero() {
        return HoleFactorization {
            h: BinaryForm::new(vec![Rat::from_integer(1.into())]),
            fhat: f.clone(),
            holes: Vec::new(),
            irrational: None,
        };
    }
    let h = f.p.gcd(&f.q);
    let fhat = HomogeneousLift {
        p: f.p.div_exact(&h).expect("gcd divides P"),
        q: f.q.div_exact(&h).expect("gcd divides Q"),
    };
    debug_assert_eq!(fhat.p.mul(&h), f.p);
    debug_assert_eq!(fhat.q.mul(&h), f.q);
    let (poly, inf) = h.dehomogenize();
    let split = rational_roots(&poly);
    let mut holes: Vec<PointQ> = split
        .roots
        .iter()
        .map(|(r, _)| ProjPoint::affine(r.clone()))
        .collect();
    if inf > 0 {
        holes.push(ProjPoint::infinity());
    }
    let irrational = (!split.remainder.is_constant()).then(|| split.remainder.squarefree_part());
    HoleFactorization {
        h,
        fhat,
        holes,
        irrational,
    }
}
