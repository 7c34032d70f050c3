//! Recurrence coefficients `alpha_k(delta)`, `beta_k(delta)` of the monic
//! orthogonal polynomials for the weight `exp(i(z^3/3 - delta z))`:
//!
//! `p_{k+1}(z) = (z - alpha_k) p_k(z) - beta_k p_{k-1}(z)`.
//!
//! Three independent routes are provided (string equations, Airy
//! determinants, discretized Stieltjes) plus Chebyshev tables in delta.

mod determinant;
mod scan;
mod stieltjes;
mod string;
mod table;

pub use determinant::determinant_coefficients;
pub use scan::{breakdown_scan, BreakdownPoint};
pub use stieltjes::{stieltjes_coefficients, StieltjesContour};
pub use string::{string_coefficients, string_coefficients_at};
pub use table::{build_table, eval_table, RecurrenceTable, TableSource};

use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::Float;
use std::fmt;
use std::sync::Arc;

/// Which route produced a set of coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    String,
    Determinant,
    Stieltjes,
    Table,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::String => "string",
            Method::Determinant => "determinant",
            Method::Stieltjes => "stieltjes",
            Method::Table => "table",
        };
        f.write_str(s)
    }
}

/// Extended-precision copy of the coefficients, used to polish nodes and
/// weights when the double-precision values are ill-conditioned.
#[derive(Clone, Debug)]
pub struct ExtendedCoefficients {
    /// `Im alpha_k`
    pub a: Vec<Float>,
    /// `beta_k`, with `beta[0] = 0`
    pub beta: Vec<Float>,
    /// `mu_0 = 2 pi Ai(-delta)` (real)
    pub mu0: Float,
}

impl ExtendedCoefficients {
    pub fn prec(&self) -> u32 {
        self.mu0.prec()
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceCoefficients {
    pub delta: f64,
    /// `alpha_0..alpha_nmax`
    pub alpha: Vec<Complex64>,
    /// `beta_0..beta_nmax`; `beta[0]` is the string-recursion seed 0 and is not
    /// a recurrence coefficient.
    pub beta: Vec<f64>,
    pub mu0: Complex64,
    pub precision_bits: u32,
    pub method: Method,
    pub extended: Option<Arc<ExtendedCoefficients>>,
    pub warnings: Vec<String>,
}

impl RecurrenceCoefficients {
    pub fn nmax(&self) -> usize {
        self.alpha.len().saturating_sub(1)
    }

    /// Coefficients truncated to `alpha_0..alpha_n`, `beta_0..beta_n`.
    pub fn truncated(&self, n: usize) -> Result<RecurrenceCoefficients> {
        if n > self.nmax() {
            return Err(Error::InsufficientCoefficients {
                needed: n + 1,
                available: self.alpha.len(),
            });
        }
        let mut out = self.clone();
        out.alpha.truncate(n + 1);
        out.beta.truncate(n + 1);
        out.extended = self.extended.as_ref().map(|e| {
            Arc::new(ExtendedCoefficients {
                a: e.a[..=n].to_vec(),
                beta: e.beta[..=n].to_vec(),
                mu0: e.mu0.clone(),
            })
        });
        Ok(out)
    }

    /// Residuals of the string equations, relative to the local scale.
    /// Returns the maxima over `k` of the beta and alpha residuals.
    pub fn string_residuals(&self) -> (f64, f64) {
        let mut rb = 0.0f64;
        let mut ra = 0.0f64;
        let d = self.delta;
        for k in 0..self.nmax() {
            let bk = self.beta[k];
            let ak = self.alpha[k];
            let pred_b = d - bk - (ak * ak).re;
            let scale_b = d.abs() + bk.abs() + ak.norm_sqr() + self.beta[k + 1].abs();
            rb = rb.max((self.beta[k + 1] - pred_b).abs() / scale_b.max(1e-300));
            let pred_a = Complex64::new(0.0, (k + 1) as f64 / self.beta[k + 1]) - ak;
            let scale_a = ((k + 1) as f64 / self.beta[k + 1]).abs() + ak.norm() + self.alpha[k + 1].norm();
            ra = ra.max((self.alpha[k + 1] - pred_a).norm() / scale_a.max(1e-300));
        }
        (rb, ra)
    }
}

/// Anything that can produce recurrence coefficients for a given delta.
pub trait CoefficientSource: Sync {
    fn coefficients(&self, delta: f64, nmax: usize) -> Result<RecurrenceCoefficients>;
}

/// String equations in extended precision (the default source).
#[derive(Clone, Copy, Debug, Default)]
pub struct StringEquations {
    /// Working precision; `None` selects `64 + 12 nmax` bits.
    pub precision_bits: Option<u32>,
}

impl CoefficientSource for StringEquations {
    fn coefficients(&self, delta: f64, nmax: usize) -> Result<RecurrenceCoefficients> {
        let p = self
            .precision_bits
            .unwrap_or_else(|| crate::mp::default_precision(nmax));
        string_coefficients(delta, nmax, p)
    }
}

/// Airy-determinant formulas.
#[derive(Clone, Copy, Debug, Default)]
pub struct Determinants {
    pub precision_bits: Option<u32>,
}

impl CoefficientSource for Determinants {
    fn coefficients(&self, delta: f64, nmax: usize) -> Result<RecurrenceCoefficients> {
        let p = self
            .precision_bits
            .unwrap_or_else(|| crate::mp::default_precision(nmax + 1));
        determinant_coefficients(delta, nmax, p)
    }
}

/// Discretized Stieltjes procedure.
#[derive(Clone, Copy, Debug, Default)]
pub struct Stieltjes {
    pub contour: StieltjesContour,
}

impl CoefficientSource for Stieltjes {
    fn coefficients(&self, delta: f64, nmax: usize) -> Result<RecurrenceCoefficients> {
        stieltjes_coefficients(delta, nmax, &self.contour)
    }
}

/// Breakdown threshold for `|beta_k|`.
pub fn breakdown_threshold(delta: f64) -> f64 {
    1e-13 * (1.0 + delta * delta)
}
