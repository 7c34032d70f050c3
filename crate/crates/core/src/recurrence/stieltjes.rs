//! Discretized Stieltjes procedure on a contour from `inf e^{5 i pi/6}` to
//! `inf e^{i pi/6}`, using the bilinear form `<f, g> = int f g w`.
//!
//! The contour is the hyperbola `z(s) = s + i sqrt(a^2 + s^2/3)`, whose
//! asymptotes point into the two decay sectors of the weight.

use super::{Method, RecurrenceCoefficients};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Discretization of the Stieltjes contour.
#[derive(Clone, Copy, Debug)]
pub struct StieltjesContour {
    /// Apex height `a`; `None` picks `max(0.5, sqrt(max(-delta, 0)))`.
    pub apex: Option<f64>,
    /// Initial number of trapezoid points.
    pub initial_points: usize,
    /// Hard cap on the number of points.
    pub max_points: usize,
    /// Weight magnitude below which the contour is truncated.
    pub cutoff: f64,
    /// Relative agreement of successive `mu_0` estimates that stops refinement.
    pub mu0_tol: f64,
}

impl Default for StieltjesContour {
    fn default() -> Self {
        StieltjesContour {
            apex: None,
            initial_points: 256,
            max_points: 1 << 16,
            cutoff: 1e-18,
            mu0_tol: 1e-12,
        }
    }
}

struct Discrete {
    z: Vec<Complex64>,
    /// weight times dz/ds times step
    w: Vec<Complex64>,
    l1: f64,
}

fn weight(z: Complex64, delta: f64) -> Complex64 {
    let i = Complex64::i();
    (i * (z * z * z / 3.0 - delta * z)).exp()
}

fn discretize(delta: f64, apex: f64, n: usize, cutoff: f64) -> Discrete {
    let point = |s: f64| Complex64::new(s, (apex * apex + s * s / 3.0).sqrt());
    // half-width where |w| drops below the cutoff (weight is even in s)
    let mut half = 1.0;
    while weight(point(half), delta).norm() > cutoff || half < 2.0 * apex {
        half *= 1.25;
    }
    let h = 2.0 * half / (n as f64 - 1.0);
    let mut z = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    let mut l1 = 0.0;
    for j in 0..n {
        let s = -half + j as f64 * h;
        let zs = point(s);
        let dz = Complex64::new(1.0, s / (3.0 * zs.im));
        let end = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        let wj = weight(zs, delta) * dz * (h * end);
        l1 += wj.norm();
        z.push(zs);
        w.push(wj);
    }
    Discrete { z, w, l1 }
}

fn stieltjes(d: &Discrete, nmax: usize) -> (Vec<Complex64>, Vec<Complex64>, Complex64) {
    let m = d.z.len();
    let mut p_prev = vec![Complex64::new(0.0, 0.0); m];
    let mut p = vec![Complex64::new(1.0, 0.0); m];
    let mut alpha = Vec::with_capacity(nmax + 1);
    let mut beta = vec![Complex64::new(0.0, 0.0)];
    let mut norm_prev = Complex64::new(1.0, 0.0);
    let mut mu0 = Complex64::new(0.0, 0.0);
    for k in 0..=nmax {
        let mut nrm = Complex64::new(0.0, 0.0);
        let mut znrm = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let t = p[j] * p[j] * d.w[j];
            nrm += t;
            znrm += t * d.z[j];
        }
        if k == 0 {
            mu0 = nrm;
        } else {
            beta.push(nrm / norm_prev);
        }
        let a = znrm / nrm;
        alpha.push(a);
        let b = if k == 0 { Complex64::new(0.0, 0.0) } else { beta[k] };
        for j in 0..m {
            let next = (d.z[j] - a) * p[j] - b * p_prev[j];
            p_prev[j] = p[j];
            p[j] = next;
        }
        norm_prev = nrm;
    }
    (alpha, beta, mu0)
}

/// Stieltjes coefficients `alpha_0..alpha_nmax`, `beta_0..beta_nmax`.
/// Disagreement between the last two refinements above 1e-6 is reported in
/// `warnings`.
pub fn stieltjes_coefficients(delta: f64, nmax: usize, contour: &StieltjesContour) -> Result<RecurrenceCoefficients> {
    if nmax > 20 {
        return Err(Error::InvalidArgument(format!(
            "Stieltjes route supports nmax <= 20, got {nmax}"
        )));
    }
    let apex = contour.apex.unwrap_or_else(|| 0.5f64.max((-delta).max(0.0).sqrt()));
    let mut n = contour.initial_points.max(16);
    let mut prev = stieltjes(&discretize(delta, apex, n, contour.cutoff), nmax);
    loop {
        n *= 2;
        let d = discretize(delta, apex, n, contour.cutoff);
        let cur = stieltjes(&d, nmax);
        let settled = (cur.2 - prev.2).norm() <= contour.mu0_tol * d.l1;
        if settled || n >= contour.max_points {
            let mut warnings = Vec::new();
            if !settled {
                warnings.push(format!("mu_0 not settled at {n} points"));
            }
            let mut worst = 0.0f64;
            for k in 0..=nmax {
                let da = (cur.0[k] - prev.0[k]).norm() / cur.0[k].norm().max(1e-300);
                let db = (cur.1[k] - prev.1[k]).norm() / cur.1[k].norm().max(1e-300);
                if k > 0 {
                    worst = worst.max(db);
                }
                worst = worst.max(da);
            }
            if worst > 1e-6 {
                warnings.push(format!(
                    "refinement disagreement {worst:.2e} exceeds 1e-6 (apex {apex}, {n} points)"
                ));
            }
            return Ok(RecurrenceCoefficients {
                delta,
                alpha: cur.0,
                beta: cur.1.iter().map(|b| b.re).collect(),
                mu0: cur.2,
                precision_bits: 53,
                method: Method::Stieltjes,
                extended: None,
                warnings,
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu0_matches_airy() {
        for &delta in &[0.0, 1.0, -3.0, 4.0] {
            let c = stieltjes_coefficients(delta, 0, &StieltjesContour::default()).unwrap();
            let exact = crate::airy::moments(delta, 0, 64).unwrap().mu[0];
            assert!((c.mu0 - exact).norm() <= 1e-10 * exact.norm(), "delta={delta}");
        }
    }
}
