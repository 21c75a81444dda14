use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use super::poly::PolyQ;
use super::rat::Rat;

/// Prime factorization of `|n|` for `n ≠ 0`.
pub fn factorize(n: &BigInt) -> BTreeMap<BigInt, u32> {
    let m: BigUint = n.magnitude().clone();
    if m.is_zero() || m.is_one() {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize(m)
        .into_iter()
        .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e as u32))
        .collect()
}

pub fn is_prime(n: &BigInt) -> bool {
    if !n.is_positive() {
        return false;
    }
    num_prime::nt_funcs::is_prime(n.magnitude(), None).probably()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Rational roots with multiplicities and the monic cofactor free of rational roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSplit {
    pub roots: Vec<(Rat, usize)>,
    pub remainder: PolyQ,
}

/// Splits off every rational root of a nonzero polynomial (rational root theorem).
pub fn rational_roots(p: &PolyQ) -> RootSplit {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut rest = p.monic();
    let mut roots = Vec::new();
    let zero_mult = rest.low_order().unwrap_or(0);
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
        rest = rest
            .div_exact(&PolyQ::monomial(Rat::one(), zero_mult))
            .expect("t^k divides");
    }
    if rest.degree().unwrap_or(0) > 0 {
        let sf = rest.squarefree_part();
        let (ints, _) = sf.to_primitive_integers();
        let lead = ints.last().cloned().unwrap();
        let constant = ints[0].clone();
        let nums = divisors(&constant);
        let dens = divisors(&lead);
        let mut cands: Vec<Rat> = Vec::new();
        for a in &nums {
            for b in &dens {
                for s in [1, -1] {
                    cands.push(Rat::new(a * s, b.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if sf.eval(&c).is_zero() {
                let m = rest.root_multiplicity(&c);
                let lin = PolyQ::linear_root(&c).pow(m as u32);
                rest = rest.div_exact(&lin).expect("root divides");
                roots.push((c, m));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    RootSplit {
        roots,
        remainder: rest.monic(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn factor_small() {
        let f = factorize(&BigInt::from(-360));
        let v: Vec<(i64, u32)> = f.iter().map(|(p, e)| (p.try_into().unwrap(), *e)).collect();
        assert_eq!(v, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(&BigInt::from(1)).is_empty());
        assert!(is_prime(&BigInt::from(101)));
        assert!(!is_prime(&BigInt::from(91)));
    }

    #[test]
    fn roots_of_mixed_polynomial() {
        // (2t - 1)^2 (t + 3) t (t^2 + 1)
        let p = PolyQ::from_ints(&[-1, 2])
            .pow(2)
            .mul(&PolyQ::from_ints(&[3, 1]))
            .mul(&PolyQ::from_ints(&[0, 1]))
            .mul(&PolyQ::from_ints(&[1, 0, 1]));
        let s = rational_roots(&p);
        assert_eq!(s.roots, vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]);
        assert_eq!(s.remainder, PolyQ::from_ints(&[1, 0, 1]));
    }
}
