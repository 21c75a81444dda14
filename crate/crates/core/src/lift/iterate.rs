use super::form::Field;
use super::map::{HomogeneousLift, ProjPoint};
use crate::{Error, Result};

/// Default bit budget for a single coordinate during exact iteration.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 22;

/// Options for [`iterate_exact`].
#[derive(Clone, Copy, Debug)]
pub struct IterOptions {
    /// Divide each iterate by the content of its coordinates.
    pub normalize: bool,
    /// Maximum size of a coordinate, in bits.
    pub bit_budget: u64,
}

impl Default for IterOptions {
    fn default() -> Self {
        IterOptions {
            normalize: true,
            bit_budget: DEFAULT_BIT_BUDGET,
        }
    }
}

/// Orbit `A_0, A_1, …` with the removed contents.
///
/// With normalization, `points[0] = A / contents[0]` and
/// `F(points[i-1]) = contents[i] · points[i]`; without it, `points[i] = F^i(A)`
/// and all contents are 1.
#[derive(Clone, Debug)]
pub struct ExactOrbit<C> {
    pub points: Vec<ProjPoint<C>>,
    pub contents: Vec<C>,
    /// First index at which the raw vector was `(0, 0)`, if any; the orbit stops there.
    pub vanished_at: Option<usize>,
}

pub fn iterate_exact<C: Field>(
    f: &HomogeneousLift<C>,
    a: &ProjPoint<C>,
    n: usize,
    opts: IterOptions,
) -> Result<ExactOrbit<C>> {
    let (a0, c0) = if opts.normalize {
        a.primitive()
    } else {
        (a.clone(), C::one())
    };
    let mut points = vec![a0];
    let mut contents = vec![c0];
    for i in 1..=n {
        let (z, w) = f.apply_raw(points.last().unwrap());
        if z.is_zero() && w.is_zero() {
            return Ok(ExactOrbit {
                points,
                contents,
                vanished_at: Some(i),
            });
        }
        let size = z.size_bits().max(w.size_bits());
        if size > opts.bit_budget {
            return Err(Error::ResourceLimit(format!(
                "iterate {i} needs {size} bits (budget {})",
                opts.bit_budget
            )));
        }
        let raw = ProjPoint { z, w };
        let (p, c) = if opts.normalize {
            raw.primitive()
        } else {
            (raw, C::one())
        };
        points.push(p);
        contents.push(c);
    }
    Ok(ExactOrbit {
        points,
        contents,
        vanished_at: None,
    })
}
