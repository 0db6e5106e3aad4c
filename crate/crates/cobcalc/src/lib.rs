//! Exact symbolic calculus for formal group laws and characteristic classes.
//!
//! The crate is organized around sparse truncated multivariate power series
//! over exact coefficient rings ([`ring`]), formal group laws including the
//! universal one over the Lazard model `Z[b1, b2, ...]` ([`fgl`]), the
//! subset-indexed decomposition of formal sums ([`zeta`]), Chern-root
//! calculus with projective-bundle coefficient machinery ([`chern`]), and
//! the Conner-Floyd / Riemann-Roch specializations ([`rr`]).
//!
//! Everything is computed exactly: coefficients are arbitrary-precision
//! integers, rationals, or graded integer polynomials. There is no floating
//! point anywhere.

pub mod check;
pub mod chern;
pub mod fgl;
pub mod ring;
pub mod rr;
pub mod selftest;
pub mod zeta;

pub use check::{CheckOutcome, Comparison};
pub use ring::{Coeff, CoeffRing, Series};
