//! Numerical checks of the Airy determinant identities.
//!
//! * Toda form: `D_{n-1} D_{n+1} = D_n D_n'' - (D_n')^2`
//! * ratio form: `(D_{n+1}/D_{n-1})' = n (D_n/D_{n-1})^2`, checked multiplied out
//! * integrated ratio form: `D_{n+1}(x) = -n D_{n-1}(x) int_x^inf (D_n/D_{n-1})^2`
//! * large-x behaviour `D_n(x) ~ c_n x^{-n^2/4} exp(-2/3 n x^{3/2})`
//!
//! Derivatives come from fourth-order central differences in extended precision.

use super::{determinants_mp, AIRY_DOMAIN};
use crate::error::{Error, Result};
use rayon::prelude::*;
use rug::Float;

#[derive(Clone, Debug)]
pub struct IdentityRow {
    pub x: f64,
    pub n: usize,
    /// Relative residual of the Toda form.
    pub differential: f64,
    /// Relative residual of the multiplied-out ratio form.
    pub ratio_form: f64,
    /// Relative residual of the integrated form, when `D_{n-1}` keeps one sign on `[x, inf)`.
    pub integrated: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct AsymptoticRow {
    pub x: f64,
    pub n: usize,
    /// `D_n(x)` over `c_n x^{-n^2/4} exp(-2/3 n x^{3/2})`.
    pub ratio: f64,
    /// Same, with the x-free exponential `exp(-2/3 n^{3/2})`; kept for comparison.
    pub ratio_x_free_exponent: f64,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub precision_bits: u32,
    pub rows: Vec<IdentityRow>,
    pub asymptotic: Vec<AsymptoticRow>,
    pub max_differential: f64,
    pub max_ratio_form: f64,
    pub max_integrated: f64,
    /// Max relative residual of `D_2' = Ai^2` over the grid.
    pub d2_derivative: f64,
    /// Estimated finite-difference noise floor (relative).
    pub noise_floor: f64,
    pub warnings: Vec<String>,
}

fn rel(num: &Float, scale: &Float) -> f64 {
    if scale.is_zero() {
        return if num.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let p = num.prec();
    Float::with_val(p, num / scale).abs().to_f64()
}

fn abs_sum(p: u32, xs: &[&Float]) -> Float {
    let mut s = Float::with_val(p, 0);
    for x in xs {
        s += Float::with_val(p, x.abs_ref());
    }
    s
}

/// Gauss-Legendre nodes and weights on [-1, 1] at `prec` bits.
pub(crate) fn gauss_legendre_mp(m: usize, prec: u32) -> Vec<(Float, Float)> {
    let mut out = Vec::with_capacity(m);
    for i in 1..=m {
        let seed = (std::f64::consts::PI * (i as f64 - 0.25) / (m as f64 + 0.5)).cos();
        let mut x = Float::with_val(prec, seed);
        let mut dp = Float::new(prec);
        for _ in 0..100 {
            let (p, d) = legendre_mp(m, &x);
            let step = Float::with_val(prec, &p / &d);
            x -= &step;
            dp = d;
            if step.is_zero() || crate::mp::log2_abs(&step) < -f64::from(prec) + 2.0 {
                let (_, d) = legendre_mp(m, &x);
                dp = d;
                break;
            }
        }
        let one_minus = Float::with_val(prec, 1) - Float::with_val(prec, x.square_ref());
        let w = Float::with_val(prec, 2) / (one_minus * Float::with_val(prec, dp.square_ref()));
        out.push((x, w));
    }
    out
}

fn legendre_mp(m: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=m {
        let kf = k as u32;
        let a = Float::with_val(prec, x * &p1) * (2 * kf - 1);
        let b = Float::with_val(prec, &p0 * (kf - 1));
        let p2 = (a - b) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_m' = m (x P_m - P_{m-1}) / (x^2 - 1)
    let num = (Float::with_val(prec, x * &p1) - &p0) * m as u32;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    (p1, num / den)
}

/// Leading constant `c_n` of the large-x behaviour of `D_n`.
pub fn asymptotic_constant(n: usize) -> f64 {
    let mut prod = 1.0f64;
    let mut fact = 1.0f64;
    for k in 0..n {
        if k > 0 {
            fact *= k as f64;
        }
        prod *= fact;
    }
    let sign = super::hankel_sign(n);
    sign * prod / (2f64.powi((n * (n + 1) / 2) as i32) * std::f64::consts::PI.powf(n as f64 / 2.0))
}

fn integrated_residuals(x: f64, nmax: usize, prec: u32, nodes: &[(Float, Float)]) -> Result<Vec<Option<f64>>> {
    let width = 0.25;
    let x0 = Float::with_val(prec, x);
    let d_at_x = determinants_mp(&x0, nmax + 1, prec)?;
    let mut sums: Vec<Float> = (0..=nmax).map(|_| Float::with_val(prec, 0)).collect();
    let mut sign_ok = vec![true; nmax + 1];
    let sign0: Vec<bool> = d_at_x.iter().map(|d| d.is_sign_negative()).collect();
    let mut left = x;
    let tiny = -f64::from(prec) - 10.0;
    loop {
        let right = left + width;
        if right > AIRY_DOMAIN.1 {
            return Err(Error::InvalidArgument(
                "integrated identity tail did not decay inside the Airy domain".into(),
            ));
        }
        let mid = Float::with_val(prec, left + right) / 2u32;
        let half = Float::with_val(prec, width) / 2u32;
        let mut panel: Vec<Float> = (0..=nmax).map(|_| Float::with_val(prec, 0)).collect();
        for (t, w) in nodes {
            let s = Float::with_val(prec, &half * t) + &mid;
            let d = determinants_mp(&s, nmax, prec)?;
            for n in 1..=nmax {
                if d[n - 1].is_sign_negative() != sign0[n - 1] || d[n - 1].is_zero() {
                    sign_ok[n] = false;
                    continue;
                }
                let r = Float::with_val(prec, &d[n] / &d[n - 1]);
                let r2 = Float::with_val(prec, r.square_ref());
                panel[n] += Float::with_val(prec, &r2 * w) * &half;
            }
        }
        let mut done = true;
        for n in 1..=nmax {
            let small = panel[n].is_zero() || crate::mp::log2_abs(&panel[n]) - crate::mp::log2_abs(&sums[n]) < tiny;
            sums[n] += &panel[n];
            if !small && sign_ok[n] {
                done = false;
            }
        }
        left = right;
        if done && left > x + 1.0 {
            break;
        }
    }
    let mut out = vec![None];
    for n in 1..=nmax {
        if !sign_ok[n] {
            out.push(None);
            continue;
        }
        // D_{n+1} + n D_{n-1} I
        let term = Float::with_val(prec, &d_at_x[n - 1] * &sums[n]) * n as u32;
        let res = Float::with_val(prec, &d_at_x[n + 1] + &term);
        out.push(Some(rel(&res, &d_at_x[n + 1])));
    }
    Ok(out)
}

/// Check the determinant identities for `1 <= n <= nmax` on `x_grid`.
pub fn verify_identities(x_grid: &[f64], nmax: usize, precision_bits: u32) -> Result<IdentityReport> {
    if nmax < 1 {
        return Err(Error::InvalidArgument("nmax must be at least 1".into()));
    }
    for &x in x_grid {
        if !(AIRY_DOMAIN.0 + 1.0..=AIRY_DOMAIN.1 - 1.0).contains(&x) {
            return Err(Error::Domain {
                value: x,
                lo: AIRY_DOMAIN.0 + 1.0,
                hi: AIRY_DOMAIN.1 - 1.0,
            });
        }
    }
    let prec = precision_bits;
    let hexp = (prec / 6) as i32;
    let nodes = gauss_legendre_mp(20, prec);

    let per_x: Vec<Result<(Vec<IdentityRow>, f64)>> = x_grid
        .par_iter()
        .map(|&x| {
            let h = Float::with_val(prec, 1) >> hexp;
            let xs: Vec<Float> = (-2i32..=2)
                .map(|j| Float::with_val(prec, x) + Float::with_val(prec, &h * j))
                .collect();
            let ds: Vec<Vec<Float>> = xs
                .iter()
                .map(|s| determinants_mp(s, nmax + 1, prec))
                .collect::<Result<_>>()?;
            let twelve_h = Float::with_val(prec, &h * 12u32);
            let twelve_h2 = Float::with_val(prec, h.square_ref()) * 12u32;
            let deriv = |k: usize| -> (Float, Float) {
                let f = |j: usize| &ds[j][k];
                let d1 = (Float::with_val(prec, f(0) - f(4)) + Float::with_val(prec, f(3) - f(1)) * 8u32) / &twelve_h;
                let d2 = (Float::with_val(prec, -f(0)) - f(4) + Float::with_val(prec, f(1) + f(3)) * 16u32
                    - Float::with_val(prec, f(2) * 30u32))
                    / &twelve_h2;
                (d1, d2)
            };
            let dx = &ds[2];
            let integrated = integrated_residuals(x, nmax, prec, &nodes)?;
            let mut rows = Vec::new();
            for n in 1..=nmax {
                let (dn1, dn2) = deriv(n);
                let lhs = Float::with_val(prec, &dx[n - 1] * &dx[n + 1]);
                let a = Float::with_val(prec, &dx[n] * &dn2);
                let b = Float::with_val(prec, dn1.square_ref());
                let res = Float::with_val(prec, &lhs - &a) + &b;
                let differential = rel(&res, &abs_sum(prec, &[&lhs, &a, &b]));

                let (dp1, _) = deriv(n + 1);
                let (dm1, _) = deriv(n - 1);
                let t1 = Float::with_val(prec, &dp1 * &dx[n - 1]);
                let t2 = Float::with_val(prec, &dx[n + 1] * &dm1);
                let t3 = Float::with_val(prec, dx[n].square_ref()) * n as u32;
                let res2 = Float::with_val(prec, &t1 - &t2) - &t3;
                let ratio_form = rel(&res2, &abs_sum(prec, &[&t1, &t2, &t3]));
                rows.push(IdentityRow {
                    x,
                    n,
                    differential,
                    ratio_form,
                    integrated: integrated[n],
                });
            }
            // D_2' = Ai^2
            let d2 = if nmax + 1 >= 2 {
                let (d2p, _) = deriv(2);
                let ai2 = Float::with_val(prec, dx[1].square_ref());
                rel(&Float::with_val(prec, &d2p - &ai2), &ai2)
            } else {
                0.0
            };
            Ok((rows, d2))
        })
        .collect();

    let mut rows = Vec::new();
    let mut d2_derivative = 0.0f64;
    for r in per_x {
        let (mut rs, d2) = r?;
        rows.append(&mut rs);
        d2_derivative = d2_derivative.max(d2);
    }

    let mut asymptotic = Vec::new();
    for &x in &[10.0f64, 20.0, 30.0] {
        let xf = Float::with_val(prec, x);
        let d = determinants_mp(&xf, nmax, prec)?;
        for n in 1..=nmax {
            let nf = n as f64;
            let ln_model = (asymptotic_constant(n).abs()).ln() - nf * nf / 4.0 * x.ln();
            let with_x = ln_model - 2.0 / 3.0 * nf * x.powf(1.5);
            let x_free = ln_model - 2.0 / 3.0 * nf.powf(1.5);
            let ln_d = crate::mp::log2_abs(&d[n]) * std::f64::consts::LN_2;
            let sign_match = d[n].is_sign_negative() == (asymptotic_constant(n) < 0.0);
            let sgn = if sign_match { 1.0 } else { -1.0 };
            asymptotic.push(AsymptoticRow {
                x,
                n,
                ratio: sgn * (ln_d - with_x).exp(),
                ratio_x_free_exponent: sgn * (ln_d - x_free).exp(),
            });
        }
    }

    let max_differential = rows.iter().map(|r| r.differential).fold(0.0, f64::max);
    let max_ratio_form = rows.iter().map(|r| r.ratio_form).fold(0.0, f64::max);
    let max_integrated = rows.iter().filter_map(|r| r.integrated).fold(0.0, f64::max);
    // rounding of the second difference: 2^-prec / h^2 relative
    let noise_floor = 2f64.powi(-(prec as i32) + 2 * hexp + 5);
    let mut warnings = Vec::new();
    if noise_floor > 1e-20 {
        warnings.push(format!(
            "finite-difference noise floor {noise_floor:.1e} exceeds 1e-20 at {prec} bits"
        ));
    }
    Ok(IdentityReport {
        precision_bits: prec,
        rows,
        asymptotic,
        max_differential,
        max_ratio_form,
        max_integrated,
        d2_derivative,
        noise_floor,
        warnings,
    })
}
