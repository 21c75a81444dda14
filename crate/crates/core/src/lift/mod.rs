//! Binary forms and homogeneous lifts over `Q` and `Q(t)`: resultants, orders at
//! places, singular sets, reductions with their hole factorizations, and orbit
//! iteration (exact and by truncated expansions).

mod form;
mod holes;
mod iterate;
mod jets;
mod local;
mod map;

pub use form::{BinaryForm, Field};
pub use holes::{hole_factorization, HoleFactorization};
pub use iterate::{iterate_exact, ExactOrbit, IterOptions, DEFAULT_BIT_BUDGET};
pub use jets::{
    iterate_jet, iterate_jet_bounded, iterate_jet_prefix, precision_cap, JetOrbit, JetStart,
    PrecisionPolicy, JET_BIT_BUDGET, PRECISION_CAP_ENV,
};
pub use local::{
    normalize_at, normalize_point_at, ord_of_lift, ord_of_point, singular_sets, specialize_lift,
    specialize_point, uniformizer_pow, LiftK, LiftQ, PointK, PointQ, SingularSets,
};
pub use map::{determinant, solve, HomogeneousLift, Mat2, Nullstellensatz, ProjPoint};
