//! Refined counts of planar tropical curves.
//!
//! The invariant `G(g,Δ)` is a symmetric Laurent polynomial in `y` obtained by
//! summing Block-Göttsche multiplicities over the genus-`g` tropical curves of
//! degree `Δ` through a generic point configuration. Two independent engines
//! compute it: floor diagrams ([`floor`]) for the projective plane and
//! `P1 × P1`, and refined lattice paths ([`paths`]) for any primitive degree.

pub mod analysis;
pub mod curve;
pub mod error;
pub mod floor;
pub mod halfint;
pub mod lattice;
pub mod paths;
pub mod poly;
pub mod poset;
pub mod spec;

use num_bigint::BigUint;

pub use crate::error::{Error, Result};
pub use crate::halfint::HalfInt;
pub use crate::lattice::{BalancedDegree, HTransverseShape, IntVec2, LatticePolygon};
pub use crate::poly::{Coefficient, LaurentPoly};

/// Refined multiplicities and invariants: arbitrary-precision coefficients.
pub type RefinedPoly = LaurentPoly<BigUint>;

/// Machine-word coefficients, for quick checks on small inputs.
pub type SmallRefinedPoly = LaurentPoly<u64>;
