//! Coefficients from Airy determinants at `x = -delta`:
//!
//! `a_n = D_{n-1} D_{n+1} / D_n^2`, `b_n = D'_{n+1}/D_{n+1} - D'_n/D_n`,
//! mapped to the contour side by `beta_n = -a_n`, `alpha_n = -i b_n`.

use super::{ExtendedCoefficients, Method, RecurrenceCoefficients};
use crate::airy::{determinants_checked_mp, determinants_mp};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use std::sync::Arc;

pub fn determinant_coefficients(delta: f64, nmax: usize, precision_bits: u32) -> Result<RecurrenceCoefficients> {
    if precision_bits < 53 {
        return Err(Error::InvalidArgument(format!(
            "precision_bits = {precision_bits} < 53"
        )));
    }
    let prec = precision_bits;
    let top = nmax + 1;
    let x = Float::with_val(prec, -delta);
    let (d, bits) = determinants_checked_mp(&x, top, prec)?;
    if let Some((n, &b)) = bits.iter().enumerate().find(|(_, &b)| b < 16.0) {
        return Err(Error::Nonexistence {
            n,
            delta,
            correct_bits: b,
        });
    }
    let d: Vec<Float> = d.into_iter().map(|v| Float::with_val(prec, v)).collect();

    // central differences with h = 2^{-prec/4}
    let h = Float::with_val(prec, 1) >> (prec / 4) as i32;
    let xp = Float::with_val(prec, &x + &h);
    let xm = Float::with_val(prec, &x - &h);
    let dp = determinants_mp(&xp, top, prec)?;
    let dm = determinants_mp(&xm, top, prec)?;
    let two_h = Float::with_val(prec, &h * 2u32);
    let log_deriv: Vec<Float> = (0..=top)
        .map(|n| {
            let der = Float::with_val(prec, &dp[n] - &dm[n]) / &two_h;
            der / &d[n]
        })
        .collect();

    let mut a = Vec::with_capacity(nmax + 1);
    let mut beta = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        // alpha_n = -i b_n, so Im alpha_n = -b_n
        let b = Float::with_val(prec, &log_deriv[n + 1] - &log_deriv[n]);
        a.push(-b);
        if n == 0 {
            beta.push(Float::new(prec));
        } else {
            let num = Float::with_val(prec, &d[n - 1] * &d[n + 1]);
            let den = Float::with_val(prec, d[n].square_ref());
            beta.push(-(num / den));
        }
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mu0 = Float::with_val(prec, &two_pi * &d[1]);
    Ok(RecurrenceCoefficients {
        delta,
        alpha: a.iter().map(|v| Complex64::new(0.0, v.to_f64())).collect(),
        beta: beta.iter().map(Float::to_f64).collect(),
        mu0: Complex64::new(mu0.to_f64(), 0.0),
        precision_bits: prec,
        method: Method::Determinant,
        extended: Some(Arc::new(ExtendedCoefficients { a, beta, mu0 })),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta1_at_zero() {
        let c = determinant_coefficients(0.0, 1, 128).unwrap();
        assert!((c.beta[1] - 0.531_457_231_960_999_5).abs() < 1e-14);
        assert!((c.alpha[0].im - 0.729_011_132_947_227).abs() < 1e-14);
    }

    #[test]
    fn large_x_behaviour_of_a_n() {
        // a_n(x) ~ -(n/2) x^{-1/2} at x = 100, i.e. delta = -100
        let c = determinant_coefficients(-100.0, 3, 256).unwrap();
        for n in 1..=3 {
            let a_n = -c.beta[n];
            let model = -(n as f64) / 2.0 / 10.0;
            assert!((a_n / model - 1.0).abs() < 0.02, "n={n}: {a_n} vs {model}");
        }
    }
}
