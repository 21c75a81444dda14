#![allow(dead_code)]

use heightforge::exact::{PlaceK, PolyQ, Rat, RationalFunction};
use heightforge::lift::{BinaryForm, HomogeneousLift, LiftK, Mat2, PointK, ProjPoint};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rf(c: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(PolyQ::from_ints(c))
}

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Polynomial in `t` of degree at most `deg` with coefficients in `[-c, c]`;
/// each coefficient is zero with probability 1/3 to keep maps sparse.
pub fn rand_poly(rng: &mut ChaCha8Rng, deg: usize, c: i64) -> RationalFunction {
    let cs: Vec<i64> = (0..=deg)
        .map(|_| {
            if rng.gen_ratio(1, 3) {
                0
            } else {
                rng.gen_range(-c..=c)
            }
        })
        .collect();
    rf(&cs)
}

/// Degree-2 lift with small polynomial coefficients and nonzero resultant.
pub fn rand_lift(rng: &mut ChaCha8Rng) -> LiftK {
    loop {
        let p = BinaryForm::new((0..3).map(|_| rand_poly(rng, 2, 3)).collect());
        let q = BinaryForm::new((0..3).map(|_| rand_poly(rng, 2, 3)).collect());
        if let Ok(f) = HomogeneousLift::new(p, q) {
            if !f.resultant().is_zero() {
                return f;
            }
        }
    }
}

pub fn rand_point(rng: &mut ChaCha8Rng) -> PointK {
    loop {
        let z = rand_poly(rng, 1, 3);
        let w = if rng.gen_ratio(1, 4) {
            rand_poly(rng, 1, 3)
        } else {
            rf(&[1])
        };
        if let Ok(a) = ProjPoint::new(z, w) {
            return a;
        }
    }
}

pub fn rand_place_k(rng: &mut ChaCha8Rng) -> PlaceK {
    match rng.gen_range(0..5) {
        0 => PlaceK::Infinity,
        k => PlaceK::Finite(Rat::from_integer((k as i64 - 2).into())),
    }
}

/// Invertible constant matrix with small integer entries.
pub fn rand_gl2(rng: &mut ChaCha8Rng) -> Mat2<RationalFunction> {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
        if e[0] * e[3] - e[1] * e[2] != 0 {
            return Mat2::new(rf(&[e[0]]), rf(&[e[1]]), rf(&[e[2]]), rf(&[e[3]]));
        }
    }
}

/// `u_γ^k` as a function of `t`.
pub fn uniformizer_pow(g: &PlaceK, k: i64) -> RationalFunction {
    heightforge::lift::uniformizer_pow(g, k)
}

/// The vector `F^m(A)` without rescaling.
pub fn vector_iterate(f: &LiftK, a: &PointK, m: usize) -> PointK {
    let mut x = a.clone();
    for _ in 0..m {
        let (z, w) = f.apply_raw(&x);
        x = ProjPoint::new(z, w).expect("nonzero resultant keeps the vector nonzero");
    }
    x
}

/// Oracle for `α_2` of the quasi-adelic example: `-log 2 · Σ_{k≥1} 1/(2^(2^k) - 1)`,
/// summed directly in floating point.
pub fn alpha2_oracle(terms: u32) -> f64 {
    let s: f64 = (1..=terms)
        .map(|k| 1.0 / (2f64.powi(2i32.pow(k)) - 1.0))
        .sum();
    -std::f64::consts::LN_2 * s
}
