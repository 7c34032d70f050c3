//! String equations. With `alpha_k = i a_k` all quantities are real:
//!
//! `beta_{k+1} = delta - beta_k + a_k^2`,  `a_{k+1} = (k+1)/beta_{k+1} - a_k`,
//!
//! seeded with `a_0 = -Ai'(-delta)/Ai(-delta)` and `beta_0 = 0`.

use super::{breakdown_threshold, ExtendedCoefficients, Method, RecurrenceCoefficients};
use crate::airy::airy_pair_mp;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use std::sync::Arc;

/// Raw extended-precision run, no breakdown checks.
pub(crate) struct StringRun {
    pub a: Vec<Float>,
    pub beta: Vec<Float>,
    /// `Ai(-delta)`
    pub ai: Float,
}

pub(crate) fn run(delta: f64, nmax: usize, prec: u32) -> Result<StringRun> {
    let x = Float::with_val(prec, -delta);
    let (ai, aip) = airy_pair_mp(&x, prec)?;
    let d = Float::with_val(prec, delta);
    let mut a = Vec::with_capacity(nmax + 1);
    let mut beta = Vec::with_capacity(nmax + 1);
    a.push(Float::with_val(prec, -&aip) / &ai);
    beta.push(Float::new(prec));
    for k in 0..nmax {
        let a2 = Float::with_val(prec, a[k].square_ref());
        let b = Float::with_val(prec, &d - &beta[k]) + a2;
        let next = Float::with_val(prec, (k + 1) as u32) / &b - &a[k];
        beta.push(b);
        a.push(next);
    }
    Ok(StringRun { a, beta, ai })
}

fn agree(x: &Float, y: &Float) -> bool {
    let (a, b) = (x.to_f64(), y.to_f64());
    if !a.is_finite() || !b.is_finite() {
        return a == b;
    }
    (a - b).abs() <= 4.0 * f64::EPSILON * b.abs()
}

fn finish(delta: f64, run: StringRun, prec: u32) -> Result<RecurrenceCoefficients> {
    let thr = breakdown_threshold(delta);
    let a0 = run.a[0].to_f64();
    if !a0.is_finite() || a0.abs() > 1e13 * (1.0 + delta.abs()) {
        return Err(Error::Breakdown {
            index: 0,
            delta,
            beta: run.ai.to_f64(),
        });
    }
    for k in 1..run.beta.len() {
        let b = run.beta[k].to_f64();
        let a = run.a[k].to_f64();
        if !b.is_finite() || b.abs() < thr || !a.is_finite() {
            return Err(Error::Breakdown {
                index: k,
                delta,
                beta: b,
            });
        }
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mu0 = Float::with_val(prec, &two_pi * &run.ai);
    let alpha = run.a.iter().map(|a| Complex64::new(0.0, a.to_f64())).collect();
    let beta = run.beta.iter().map(Float::to_f64).collect();
    Ok(RecurrenceCoefficients {
        delta,
        alpha,
        beta,
        mu0: Complex64::new(mu0.to_f64(), 0.0),
        precision_bits: prec,
        method: Method::String,
        extended: Some(Arc::new(ExtendedCoefficients {
            a: run.a,
            beta: run.beta,
            mu0,
        })),
        warnings: Vec::new(),
    })
}

/// String-equation coefficients at a single working precision, without the
/// doubling check.
pub fn string_coefficients_at(delta: f64, nmax: usize, precision_bits: u32) -> Result<RecurrenceCoefficients> {
    let r = run(delta, nmax, precision_bits)?;
    finish(delta, r, precision_bits)
}

/// String-equation coefficients `alpha_0..alpha_nmax`, `beta_0..beta_nmax`,
/// validated by recomputing at doubled precision until the double-rounded
/// values stop changing.
pub fn string_coefficients(delta: f64, nmax: usize, precision_bits: u32) -> Result<RecurrenceCoefficients> {
    if precision_bits < 53 {
        return Err(Error::InvalidArgument(format!(
            "precision_bits = {precision_bits} < 53"
        )));
    }
    let mut prec = precision_bits;
    let mut lo = run(delta, nmax, prec)?;
    for _ in 0..6 {
        let hi = run(delta, nmax, 2 * prec)?;
        let ok =
            lo.a.iter().zip(&hi.a).all(|(x, y)| agree(x, y)) && lo.beta.iter().zip(&hi.beta).all(|(x, y)| agree(x, y));
        prec *= 2;
        lo = hi;
        if ok {
            return finish(delta, lo, prec);
        }
    }
    let mut c = finish(delta, lo, prec)?;
    c.warnings
        .push(format!("precision doubling did not settle by {prec} bits"));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values_at_zero() {
        let c = string_coefficients(0.0, 2, 96).unwrap();
        assert!(c.alpha[0].re == 0.0);
        assert!((c.alpha[0].im - 0.729_011_132_947_227).abs() < 1e-14);
        assert!((c.beta[1] - 0.531_457_231_960_999_5).abs() < 1e-14);
        assert!((c.alpha[1].im - 1.152_607_819_362_719_5).abs() < 1e-14);
    }

    #[test]
    fn breakdown_at_first_airy_zero() {
        let e = string_coefficients(2.338_107_410_459_767, 3, 128).unwrap_err();
        assert!(matches!(e, Error::Breakdown { index: 0, .. }));
    }

    #[test]
    fn residuals_small() {
        let c = string_coefficients(1.0, 30, 64 + 12 * 30).unwrap();
        let (rb, ra) = c.string_residuals();
        assert!(rb < 1e-12 && ra < 1e-12, "{rb} {ra}");
    }
}
