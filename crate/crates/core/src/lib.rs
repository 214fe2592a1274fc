//! Counting machinery for the projective modular group acting on the
//! hyperbolic plane.
//!
//! The crate provides exact group arithmetic with canonical
//! representatives ([`group`]), closed-form half-plane geometry
//! ([`plane`]), exact rational orbit points ([`rational`]), censuses of
//! metric balls and orbits ([`orbit`]), conjugacy-class counts with the
//! near-axis machinery behind their growth bounds ([`conjugacy`]), growth
//! series with exponent fits and constant calibration ([`growth`]), and a
//! validated on-disk enumeration cache ([`cache`]).
//!
//! Lengths default to hyperbolic units; the surface convention halves
//! them, see [`plane::Units`]. Distance comparisons use the shared
//! boundary tolerance [`plane::DISTANCE_TOL`] and report boundary hits
//! rather than silently resolving ties.

pub mod cache;
pub mod conjugacy;
pub mod error;
pub mod group;
pub mod growth;
pub mod orbit;
pub mod plane;
pub mod rational;

pub use error::{Error, Result};
pub use group::{enumerate_norm_ball, scan_norm_ball, ElementClass, GroupElement};
pub use plane::{distance, mobius_apply, Geodesic, Point, Units, DISTANCE_TOL};
pub use rational::RationalPoint;
