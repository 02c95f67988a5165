//! Exact machinery for Padé approximants of Lerch-type series
//! Φ_s(x, z) = Σ_{k≥0} z^{k+1}/(k+x+1)^s, the determinant identities that
//! prove their non-degeneracy, and the positivity criterion that turns them
//! into linear-independence statements with an effective irrationality
//! measure.
//!
//! Everything upstream of the final float conversion is exact rational
//! arithmetic; the only inexact type, [`bigfloat::BigFloat`], carries a
//! rigorous absolute error bound with every value.
//!
//! Module layout:
//!
//! - [`rat`]: arbitrary-precision rationals plus small number-theoretic
//!   helpers (rising factorials, progression lcms, denominator lcms)
//! - [`poly`]: dense univariate polynomials over the rationals, including
//!   the ε-polynomials used for collision (confluent) limits
//! - [`series`]: truncated Laurent tails in 1/z with order queries
//! - [`bigfloat`]: fixed-point interval arithmetic with ln/exp/π
//! - [`operators`]: the shifted multiplication, integration, and evaluation
//!   operators on K[t] that generate the approximants
//! - [`pade`]: the simultaneous Padé system, its degree/order verification,
//!   and remainder series
//! - [`determinant`]: the determinant chain from the Padé matrix down to
//!   explicit Vandermonde-type closed forms
//! - [`criterion`]: the positivity quantity V, the irrationality measure,
//!   and threshold tables for the geometric-series family
//! - [`numeric`]: high-precision evaluation of the series, partial-fraction
//!   decompositions, remainder-norm checks, and brute-force minima of
//!   integer linear forms

pub mod bigfloat;
pub mod criterion;
pub mod determinant;
pub mod numeric;
pub mod operators;
pub mod pade;
pub mod poly;
pub mod rat;
pub mod series;

mod error;

pub use error::{Error, Result};
