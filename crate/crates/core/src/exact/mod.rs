//! Exact arithmetic over `Q`, `Q[t]` and `Q(t)`, places and valuations, truncated
//! Laurent expansions, and certified interval logarithms.

mod dyadic;
mod factor;
mod interval;
mod jet;
mod logvalue;
mod place;
mod poly;
mod rat;
mod ratfunc;

pub use dyadic::{Dyadic, Round};
pub use factor::{factorize, is_prime, rational_roots, RootSplit};
pub use interval::{ln_rat, Interval, DEFAULT_BITS};
pub use jet::{laurent_expand, LaurentJet, EXACT_ZERO_ABS};
pub use logvalue::{log_abs, log_plus_abs, product_formula_check, LogValue};
pub use place::{ord_at, PlaceK, PlaceQ};
pub use poly::PolyQ;
pub use rat::{int, parse_rat, rat, vp_int, vp_rat, Rat};
pub use ratfunc::RationalFunction;
