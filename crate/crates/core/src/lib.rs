//! Escape rates and canonical heights for rational self-maps of the projective
//! line defined over the rational function field `Q(t)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] - rationals, polynomials and rational functions over `Q`, places of
//!   `Q` and `Q(t)`, truncated Laurent jets and certified real intervals.
//! * [`lift`] - binary forms, homogeneous lifts, resultants, singular sets, hole
//!   factorizations and orbit iteration (exact and jet based).
//! * [`fatou`] - hole-avoidance verdicts and the search for coordinate changes that
//!   make a pair hole-avoiding.
//! * [`geometric`] - escape rates at places of `Q(t)`, local canonical heights and
//!   the divisor of a pair.
//! * [`arithmetic`] - specialization at `t0 ∈ Q`, certified escape rates at places
//!   of `Q`, canonical heights, Weil heights and the difference functions `V_v`.
//! * [`catalog`] - the built-in example families together with itinerary-driven
//!   constructions of Julia points.
//! * [`format`] - the JSON map/point interchange format shared with the CLI.

pub mod arithmetic;
pub mod catalog;
pub mod error;
pub mod exact;
pub mod fatou;
pub mod format;
pub mod geometric;
pub mod lift;

pub use error::{Error, Result};
