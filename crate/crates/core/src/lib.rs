//! Uniform numerical steepest descent (UNSD) quadrature for oscillatory
//! integrals `int f(x) exp(i omega (x^3/3 - c x)) dx` whose two saddle points
//! `+-sqrt(c)` coalesce as `c -> 0`.
//!
//! The saddle region is handled by a complex Gaussian rule for the weight
//! `exp(i(t^3/3 - delta t))` on a contour from `inf e^{5 i pi/6}` to
//! `inf e^{i pi/6}`, with `delta = c omega^{2/3}`.

pub mod airy;
pub mod cheb;
pub mod contours;
pub mod error;
pub mod experiments;
pub mod gauss;
pub mod mp;
pub mod recurrence;

pub use error::{Error, Result};
