//! Complex Gaussian rules for the weight `exp(i(t^3/3 - delta t))` on the
//! contour from `inf e^{5 i pi/6}` to `inf e^{i pi/6}`.
//!
//! Nodes are eigenvalues of the complex-symmetric Jacobi matrix, polished by
//! Newton on the monic recurrence; weights come from the orthonormal
//! recurrence, `w = 1 / sum_k pi_k(t)^2`.

pub mod classical;
pub mod eigen;

pub use classical::{gauss_hermite, gauss_laguerre};

use crate::error::{Error, Result};
use crate::mp::MpComplex;
use crate::recurrence::{CoefficientSource, RecurrenceCoefficients};
use num_complex::Complex64;
use rug::Float;
use std::fmt::Write as _;

type C = Complex64;

/// Complex-symmetric tridiagonal Jacobi matrix.
#[derive(Clone, Debug)]
pub struct JacobiMatrix {
    pub n: usize,
    /// `alpha_0..alpha_{n-1}`
    pub diagonal: Vec<C>,
    /// `sqrt(beta_1)..sqrt(beta_{n-1})`, principal branch
    pub off_diagonal: Vec<C>,
}

impl JacobiMatrix {
    /// Max absolute row sum.
    pub fn norm(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let mut s = self.diagonal[i].norm();
                if i > 0 {
                    s += self.off_diagonal[i - 1].norm();
                }
                if i + 1 < self.n {
                    s += self.off_diagonal[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RuleDiagnostics {
    /// Max over nodes of the eigen-residual `|(J - t) v| / (|J| |v|)` before polishing.
    pub max_eigen_residual: f64,
    /// Smallest pairwise node distance.
    pub min_node_separation: f64,
    /// Largest node modulus (at least 1), used as the node scale.
    pub node_scale: f64,
    /// Largest Newton correction applied to an eigenvalue.
    pub max_newton_correction: f64,
    /// Number of weights taken from the Lagrange fallback.
    pub lagrange_fallbacks: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub n: usize,
    pub delta: f64,
    /// Sorted by real part, then imaginary part.
    pub nodes: Vec<C>,
    pub weights: Vec<C>,
    pub diagnostics: RuleDiagnostics,
}

/// Principal complex square root of a real number.
fn csqrt(b: f64) -> C {
    C::new(b, 0.0).sqrt()
}

pub fn jacobi_matrix(coeffs: &RecurrenceCoefficients, n: usize) -> Result<JacobiMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("rule order must be at least 1".into()));
    }
    if coeffs.alpha.len() < n || coeffs.beta.len() < n {
        return Err(Error::InsufficientCoefficients {
            needed: n,
            available: coeffs.alpha.len().min(coeffs.beta.len()),
        });
    }
    let thr = crate::recurrence::breakdown_threshold(coeffs.delta);
    for k in 1..n {
        let b = coeffs.beta[k];
        if !b.is_finite() || b.abs() < thr {
            return Err(Error::Breakdown {
                index: k,
                delta: coeffs.delta,
                beta: b,
            });
        }
    }
    Ok(JacobiMatrix {
        n,
        diagonal: coeffs.alpha[..n].to_vec(),
        off_diagonal: coeffs.beta[1..n].iter().map(|&b| csqrt(b)).collect(),
    })
}

/// Monic `p_n(t)` and `p_n'(t)` in double precision.
fn monic_eval(coeffs: &RecurrenceCoefficients, n: usize, t: C) -> (C, C) {
    let mut p_prev = C::new(0.0, 0.0);
    let mut p = C::new(1.0, 0.0);
    let mut d_prev = C::new(0.0, 0.0);
    let mut d = C::new(0.0, 0.0);
    for k in 0..n {
        let b = if k == 0 { 0.0 } else { coeffs.beta[k] };
        let next = (t - coeffs.alpha[k]) * p - p_prev * b;
        let dnext = p + (t - coeffs.alpha[k]) * d - d_prev * b;
        p_prev = p;
        p = next;
        d_prev = d;
        d = dnext;
    }
    (p, d)
}

/// Monic `p_n(t)` in double precision, exposed for consistency checks.
pub fn monic_polynomial(coeffs: &RecurrenceCoefficients, n: usize, t: C) -> C {
    monic_eval(coeffs, n, t).0
}

/// Newton step `p_n/p_n'` at `t` in extended precision.
fn newton_step_mp(a: &[Float], beta: &[Float], n: usize, t: &MpComplex) -> MpComplex {
    let prec = t.prec();
    let mut p_prev = MpComplex::zero(prec);
    let mut p = MpComplex::from_parts(Float::with_val(prec, 1), Float::new(prec));
    let mut d_prev = MpComplex::zero(prec);
    let mut d = MpComplex::zero(prec);
    for k in 0..n {
        let tk = t.sub_i(&a[k]);
        let next = if k == 0 {
            tk.mul(&p)
        } else {
            tk.mul(&p).sub(&p_prev.scale(&beta[k]))
        };
        let dnext = if k == 0 {
            p.add(&tk.mul(&d))
        } else {
            p.add(&tk.mul(&d)).sub(&d_prev.scale(&beta[k]))
        };
        p_prev = p;
        p = next;
        d_prev = d;
        d = dnext;
    }
    p.div(&d)
}

/// Sort by real part, ties by imaginary part.
fn sort_nodes(v: &mut [C]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Orthonormal values `pi_0..pi_{n-1}` at `t` in double precision (principal roots).
fn orthonormal_values(coeffs: &RecurrenceCoefficients, n: usize, t: C) -> Vec<C> {
    let mut out = Vec::with_capacity(n);
    let mut prev = C::new(0.0, 0.0);
    let mut cur = C::new(1.0, 0.0) / coeffs.mu0.sqrt();
    out.push(cur);
    for k in 0..n.saturating_sub(1) {
        let sb_next = csqrt(coeffs.beta[k + 1]);
        let sb = if k == 0 {
            C::new(0.0, 0.0)
        } else {
            csqrt(coeffs.beta[k])
        };
        let next = ((t - coeffs.alpha[k]) * cur - sb * prev) / sb_next;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Eigenvalues of `J`, Newton-polished on `p_n`, with diagnostics.
pub fn nodes(j: &JacobiMatrix, coeffs: &RecurrenceCoefficients) -> Result<(Vec<C>, RuleDiagnostics)> {
    let n = j.n;
    let raw = eigen::tridiagonal_eigenvalues(&j.diagonal, &j.off_diagonal)?;
    let jnorm = j.norm().max(f64::MIN_POSITIVE);
    let mut diag = RuleDiagnostics::default();

    // eigen-residual from the eigenvector v_k = pi_k(t): only the last row fails to vanish
    for &t in &raw {
        let pis = orthonormal_values(coeffs, n, t);
        let last = if n == 1 {
            t - j.diagonal[0]
        } else {
            (t - j.diagonal[n - 1]) * pis[n - 1] - j.off_diagonal[n - 2] * pis[n - 2]
        };
        let vnorm = pis.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt();
        let res = if n == 1 {
            last.norm() / jnorm
        } else {
            last.norm() / (jnorm * vnorm)
        };
        diag.max_eigen_residual = diag.max_eigen_residual.max(res);
    }

    let mut out = Vec::with_capacity(n);
    for &t0 in &raw {
        let t = match &coeffs.extended {
            Some(ext) => {
                let prec = ext.prec();
                let mut t = MpComplex::from_c64(prec, t0);
                for _ in 0..60 {
                    let step = newton_step_mp(&ext.a, &ext.beta, n, &t);
                    let s = step.to_c64();
                    t = t.sub(&step);
                    if !(s.norm() > 1e-19 * t.to_c64().norm().max(1.0)) {
                        break;
                    }
                }
                t.to_c64()
            }
            None => {
                let mut t = t0;
                for _ in 0..60 {
                    let (p, d) = monic_eval(coeffs, n, t);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let s = p / d;
                    t -= s;
                    if !(s.norm() > 1e-16 * t.norm().max(1.0)) {
                        break;
                    }
                }
                t
            }
        };
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::EigenConvergence { n });
        }
        diag.max_newton_correction = diag.max_newton_correction.max((t - t0).norm());
        out.push(t);
    }
    sort_nodes(&mut out);
    let scale = out.iter().map(|t| t.norm()).fold(1.0, f64::max);
    diag.node_scale = scale;
    let mut min_sep = f64::INFINITY;
    let mut pair = (0, 0);
    for a in 0..n {
        for b in a + 1..n {
            let s = (out[a] - out[b]).norm();
            if s < min_sep {
                min_sep = s;
                pair = (a, b);
            }
        }
    }
    diag.min_node_separation = min_sep;
    if min_sep <= 1e-10 * scale {
        return Err(Error::CoincidentNodes {
            i: pair.0,
            j: pair.1,
            separation: min_sep,
        });
    }
    if min_sep < 1e-8 * scale {
        diag.warnings
            .push(format!("near-multiple root: separation {min_sep:.2e}"));
    }
    if diag.max_newton_correction > 1e-3 * scale {
        diag.warnings.push(format!(
            "Newton moved an eigenvalue by {:.2e}",
            diag.max_newton_correction
        ));
    }
    Ok((out, diag))
}

/// `sum_k pi_k(t)^2` and `sum_k |pi_k(t)|^2` from monic values and norms
/// `N_k = mu_0 beta_1 ... beta_k` (branch free).
fn christoffel_sum(coeffs: &RecurrenceCoefficients, n: usize, t: C) -> (C, f64) {
    match &coeffs.extended {
        Some(ext) => {
            let prec = ext.prec();
            let tt = MpComplex::from_c64(prec, t);
            let mut p_prev = MpComplex::zero(prec);
            let mut p = MpComplex::from_parts(Float::with_val(prec, 1), Float::new(prec));
            let mut norm = ext.mu0.clone();
            let mut s = MpComplex::zero(prec);
            let mut sabs = Float::with_val(prec, 0);
            for k in 0..n {
                if k > 0 {
                    norm *= &ext.beta[k];
                }
                let p2 = p.mul(&p);
                let inv = Float::with_val(prec, norm.recip_ref());
                s = s.add(&p2.scale(&inv));
                sabs += Float::with_val(prec, p.norm_sqr() * &inv).abs();
                if k + 1 < n {
                    let tk = tt.sub_i(&ext.a[k]);
                    let next = if k == 0 {
                        tk.mul(&p)
                    } else {
                        tk.mul(&p).sub(&p_prev.scale(&ext.beta[k]))
                    };
                    p_prev = p;
                    p = next;
                }
            }
            (s.to_c64(), sabs.to_f64())
        }
        None => {
            let mut p_prev = C::new(0.0, 0.0);
            let mut p = C::new(1.0, 0.0);
            let mut norm = coeffs.mu0;
            let mut s = C::new(0.0, 0.0);
            let mut sabs = 0.0;
            for k in 0..n {
                if k > 0 {
                    norm *= coeffs.beta[k];
                }
                s += p * p / norm;
                sabs += p.norm_sqr() / norm.norm();
                if k + 1 < n {
                    let b = if k == 0 { 0.0 } else { coeffs.beta[k] };
                    let next = (t - coeffs.alpha[k]) * p - p_prev * b;
                    p_prev = p;
                    p = next;
                }
            }
            (s, sabs)
        }
    }
}

/// Weights `w_j = 1 / sum_k pi_k(t_j)^2`, falling back to the Lagrange form
/// `w_j = int l_j(t) w(t) dt` (by the oracle integrator) when the sum cancels.
pub fn weights(coeffs: &RecurrenceCoefficients, nodes: &[C]) -> Result<(Vec<C>, usize)> {
    let n = nodes.len();
    for a in 0..n {
        for b in a + 1..n {
            if nodes[a] == nodes[b] {
                return Err(Error::CoincidentNodes {
                    i: a,
                    j: b,
                    separation: 0.0,
                });
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut fallbacks = 0;
    for (j, &t) in nodes.iter().enumerate() {
        let (s, sabs) = christoffel_sum(coeffs, n, t);
        if s.norm() < 1e-12 * sabs || !(s.norm() > 0.0) {
            out.push(lagrange_weight(coeffs.delta, nodes, j)?);
            fallbacks += 1;
        } else {
            out.push(C::new(1.0, 0.0) / s);
        }
    }
    Ok((out, fallbacks))
}

/// `int_Gamma l_j(t) exp(i(t^3/3 - delta t)) dt` by the oracle integrator.
pub fn lagrange_weight(delta: f64, nodes: &[C], j: usize) -> Result<C> {
    let tj = nodes[j];
    let f = |t: C| -> C {
        let mut v = C::new(1.0, 0.0);
        for (k, &tk) in nodes.iter().enumerate() {
            if k != j {
                v *= (t - tk) / (tj - tk);
            }
        }
        v
    };
    let params = crate::contours::OscillatorParams::from_delta(1.0, delta);
    let r = crate::contours::oracle_integral(&f, &params, &crate::contours::OracleContour::Gamma, 1e-14)?;
    Ok(r.value)
}

/// Golub-Welsch style weights `mu_0 v_1^2` from eigenvectors obtained by
/// inverse iteration, normalized with the plain transpose (`v^T v = 1`).
/// Used only as a cross-check of [`weights`].
pub fn golub_welsch_weights(j: &JacobiMatrix, mu0: C, nodes: &[C]) -> Vec<C> {
    let n = j.n;
    nodes
        .iter()
        .map(|&t| {
            let shift = t + C::new(1e-10, 1e-10) * t.norm().max(1.0);
            let mut a = vec![vec![C::new(0.0, 0.0); n]; n];
            for i in 0..n {
                a[i][i] = j.diagonal[i] - shift;
                if i + 1 < n {
                    a[i][i + 1] = j.off_diagonal[i];
                    a[i + 1][i] = j.off_diagonal[i];
                }
            }
            let mut v = vec![C::new(1.0, 0.0); n];
            for _ in 0..3 {
                match eigen::solve(a.clone(), v.clone()) {
                    Some(x) => {
                        let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
                        v = x.into_iter().map(|z| z / m).collect();
                    }
                    None => break,
                }
            }
            let vtv: C = v.iter().map(|z| z * z).sum();
            mu0 * v[0] * v[0] / vtv
        })
        .collect()
}

/// n-point rule for `delta` with coefficients from `source`.
pub fn unsd_rule(delta: f64, n: usize, source: &dyn CoefficientSource) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("rule order must be at least 1".into()));
    }
    let coeffs = source.coefficients(delta, n - 1)?;
    rule_from_coefficients(&coeffs, n)
}

pub fn rule_from_coefficients(coeffs: &RecurrenceCoefficients, n: usize) -> Result<QuadratureRule> {
    let j = jacobi_matrix(coeffs, n)?;
    let (nodes, mut diag) = nodes(&j, coeffs)?;
    let (w, fallbacks) = weights(coeffs, &nodes)?;
    diag.lagrange_fallbacks = fallbacks;
    if n % 2 == 1 {
        diag.warnings
            .push("odd n: the rule may not exist or may be ill-conditioned near isolated delta values".into());
    }
    diag.warnings.extend(coeffs.warnings.iter().cloned());
    Ok(QuadratureRule {
        n,
        delta: coeffs.delta,
        nodes,
        weights: w,
        diagnostics: diag,
    })
}

/// `omega^{-1/3} sum_k w_k f(t_k omega^{-1/3})`.
pub fn apply_rule<F: Fn(C) -> C + ?Sized>(rule: &QuadratureRule, f: &F, omega: f64) -> C {
    let s = omega.powf(-1.0 / 3.0);
    let mut acc = C::new(0.0, 0.0);
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(t * s);
    }
    acc * s
}

/// Hermite nodes `x_j` placed on the local descent line of the saddle `xi`:
/// `xi + x_j sqrt(i / xi)`, the large-`delta` limit of the rule's clusters.
pub fn saddle_nodes_linear(xi: f64, hermite: &[f64]) -> Vec<C> {
    let d = (C::i() / xi).sqrt();
    hermite.iter().map(|x| d * *x + xi).collect()
}

/// CSV with header `k,re_t,im_t,re_w,im_w`, 17 significant digits.
pub fn rule_to_csv(rule: &QuadratureRule) -> String {
    let mut s = String::from("k,re_t,im_t,re_w,im_w\n");
    for (k, (t, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let _ = writeln!(s, "{k},{:.16e},{:.16e},{:.16e},{:.16e}", t.re, t.im, w.re, w.im);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::StringEquations;

    #[test]
    fn one_point_rule_at_zero() {
        let r = unsd_rule(0.0, 1, &StringEquations::default()).unwrap();
        assert!((r.nodes[0] - C::new(0.0, 0.729_011_132_947_227)).norm() < 1e-14);
        assert!((r.weights[0] - C::new(2.230_707_051_824_495_7, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn two_point_jacobi_offdiagonal() {
        let c = StringEquations::default().coefficients(0.0, 1).unwrap();
        let j = jacobi_matrix(&c, 2).unwrap();
        assert!((j.off_diagonal[0] - C::new(0.729_011_132_947_227, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn golub_welsch_matches_christoffel() {
        let c = StringEquations::default().coefficients(1.0, 7).unwrap();
        let r = rule_from_coefficients(&c, 8).unwrap();
        let j = jacobi_matrix(&c, 8).unwrap();
        let gw = golub_welsch_weights(&j, c.mu0, &r.nodes);
        for (a, b) in gw.iter().zip(&r.weights) {
            assert!((a - b).norm() < 1e-9 * b.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = unsd_rule(0.0, 2, &StringEquations::default()).unwrap();
        let csv = rule_to_csv(&r);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("k,re_t,im_t,re_w,im_w"));
    }
}
