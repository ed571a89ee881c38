//! Near-covers of simplicial complexes.
//!
//! The crate builds covering complexes from non-abelian 1-cochains, measures how far
//! such a lift is from a genuine cover (deficiency and the randomized triangle test),
//! and computes cosystolic expansion and cover-stability exactly on small complexes.
//! The [`lattice`] module carries the machinery for order complexes of geometric
//! lattices, including the spherical building of `F_q^4` and its expansion certificate.
//!
//! All weights, norms and ratios are exact rationals ([`Rational`]); floating point is
//! only used for reporting sampling estimates.

pub mod cochains;
pub mod complex;
pub mod covers;
mod error;
pub mod expansion;
pub mod groups;
pub mod io;
pub mod lattice;
pub mod rng;
pub mod search;

pub use error::{Error, Result};

/// Exact rational number used for every weight, norm and ratio.
pub type Rational = num_rational::BigRational;

/// Builds a [`Rational`] from a small numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
  Rational::new(num.into(), den.into())
}
