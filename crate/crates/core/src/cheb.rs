//! Oscillatory Chebyshev moments `int_{-1}^1 T_k(x) exp(i omega x) dx` near
//! resonance `k ~ omega`.
//!
//! With `x = cos t` the moment is `I_1 + I_2`,
//! `I_{1,2} = 1/2 int_0^pi sin t exp(i omega (+-m t + cos t)) dt`, `m = k/omega`.
//! The phase `phi(t) = m t + cos t` of `I_1` has saddles where `sin t = m`,
//! which coalesce at `pi/2` when `m = 1`. It is mapped onto
//! `u^3/3 - K u + eta` and the saddle region is integrated with the uniform
//! rule; endpoints and `I_2` use Gauss-Laguerre on descent paths in `t`.

use crate::contours::paths::{linear_q, Tracker};
use crate::contours::real_integral;
use crate::error::{Error, Result};
use crate::gauss::{gauss_laguerre, unsd_rule};
use crate::recurrence::{CoefficientSource, StringEquations};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

type C = Complex64;

/// Supported `m` window for the uniform path.
pub const M_WINDOW: (f64, f64) = (0.5, 1.5);

/// One of the two pieces `1/2 int_0^pi sin t exp(i omega (sign m t + cos t)) dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigOscillator {
    pub sign: i32,
    pub m: f64,
    pub omega: f64,
    pub interval: (f64, f64),
    /// Whether `sign m - sin t` vanishes on the interval.
    pub has_saddles: bool,
}

impl TrigOscillator {
    /// Phase and its derivative.
    pub fn phase(&self, t: C) -> (C, C) {
        let s = self.sign as f64 * self.m;
        (t * s + t.cos(), C::new(s, 0.0) - t.sin())
    }
}

pub fn split_integrals(k: usize, omega: f64) -> (TrigOscillator, TrigOscillator) {
    let m = k as f64 / omega;
    let i1 = TrigOscillator {
        sign: 1,
        m,
        omega,
        interval: (0.0, PI),
        has_saddles: m <= 1.0,
    };
    let i2 = TrigOscillator {
        sign: -1,
        has_saddles: false,
        ..i1
    };
    (i1, i2)
}

/// Solutions `(t_plus, t_minus)` of `sin t = m` nearest `pi/2`.
pub fn find_saddles(m: f64) -> (C, C) {
    if m <= 1.0 {
        let a = m.asin();
        (C::new(PI - a, 0.0), C::new(a, 0.0))
    } else {
        let b = m.acosh();
        (C::new(FRAC_PI_2, b), C::new(FRAC_PI_2, -b))
    }
}

/// Conformal map between `phi(t) = m t + cos t` and `u^3/3 - K u + eta`.
#[derive(Clone, Debug)]
pub struct ResonanceMap {
    pub m: f64,
    pub t_plus: C,
    pub t_minus: C,
    pub k_param: f64,
    pub eta: f64,
    /// Slope of the linear Newton seed `t = pi/2 + lambda u`.
    pub lambda: f64,
}

pub fn cubic_normal_form(m: f64) -> Result<ResonanceMap> {
    if !(m >= M_WINDOW.0 && m <= M_WINDOW.1) {
        return Err(Error::Domain {
            value: m,
            lo: M_WINDOW.0,
            hi: M_WINDOW.1,
        });
    }
    let (tp, tm) = find_saddles(m);
    let eta = m * FRAC_PI_2;
    let (k_param, lambda) = if m < 1.0 {
        // (2/3) K^{3/2} = (phi(t-) - phi(t+))/2
        let a = m.asin();
        let half = (1.0 - m * m).sqrt() - m * (FRAC_PI_2 - a);
        let k = (1.5 * half).powf(2.0 / 3.0);
        (k, m.acos() / k.sqrt())
    } else if m > 1.0 {
        // phi(pi/2 +- i b) - eta = +- i (m b - sinh b); the cubic has i (2/3) s^3 at u = i s
        let b = m.acosh();
        let d = m * b - b.sinh();
        let s = (1.5 * d).cbrt();
        (-(s * s), b / s)
    } else {
        (0.0, 2f64.cbrt())
    };
    Ok(ResonanceMap {
        m,
        t_plus: tp,
        t_minus: tm,
        k_param,
        eta,
        lambda,
    })
}

impl ResonanceMap {
    pub fn phi(&self, t: C) -> C {
        t * self.m + t.cos()
    }

    pub fn cubic(&self, u: C) -> C {
        u * u * u / 3.0 - u * self.k_param + self.eta
    }

    /// `t(u)` by Newton on `phi(t) = u^3/3 - K u + eta`.
    pub fn t_of_u(&self, u: C) -> Result<C> {
        self.t_of_u_seeded(u, C::new(FRAC_PI_2, 0.0) + u * self.lambda)
    }

    pub fn t_of_u_seeded(&self, u: C, seed: C) -> Result<C> {
        let target = self.cubic(u);
        let mut t = seed;
        for _ in 0..100 {
            let f = self.phi(t) - target;
            let d = C::new(self.m, 0.0) - t.sin();
            if d.norm() == 0.0 {
                break;
            }
            let mut s = f / d;
            // damp steps that leave the basin of the seed
            if s.norm() > 1.0 {
                s /= s.norm();
            }
            t -= s;
            if s.norm() <= 2.0 * f64::EPSILON * t.norm() {
                break;
            }
        }
        if (self.phi(t) - target).norm() <= 1e-13 * target.norm().max(1.0) {
            Ok(t)
        } else {
            Err(Error::NewtonNonconvergence { re: u.re, im: u.im })
        }
    }

    /// `dt/du = (u^2 - K)/phi'(t)`, with the saddle limit `sqrt(2u/phi''(t))`
    /// close to `u = +-sqrt K`.
    pub fn jacobian(&self, u: C, t: C) -> C {
        let k = self.k_param;
        let sk = C::new(k, 0.0).sqrt();
        let near = |s: C| (u - s).norm() <= 1e-3 * sk.norm();
        if k == 0.0 && u.norm() < 1e-8 {
            return C::new(self.lambda, 0.0);
        }
        if k != 0.0 && (near(sk) || near(-sk)) {
            let r = (u * 2.0 / (-t.cos())).sqrt();
            // branch of the orientation-preserving map
            return if (r - self.lambda).norm() <= (r + self.lambda).norm() {
                r
            } else {
                -r
            };
        }
        (u * u - k) / (C::new(self.m, 0.0) - t.sin())
    }

    pub fn residual(&self, u: C, t: C) -> f64 {
        (self.phi(t) - self.cubic(u)).norm()
    }
}

/// `int_{Gamma_a} 1/2 sin t exp(i omega phi) dt` from `t = a` along the descent
/// path `phi(h) = phi(a) + i p`, by n-point Gauss-Laguerre.
fn trig_endpoint(osc: &TrigOscillator, a: f64, n: usize) -> Result<C> {
    let omega = osc.omega;
    let g = |z: C| osc.phase(z);
    let h0 = C::new(a, 0.0);
    let (g0, gp) = g(h0);
    if gp.norm() < 1e-12 {
        return Err(Error::PathTracking(format!("endpoint {a} is stationary")));
    }
    let (x, w) = gauss_laguerre(n);
    let q: &dyn Fn(f64) -> (f64, f64) = &linear_q;
    let mut tr = Tracker::new(&g, g0, q, 0.0, h0, 0.05 * gp.norm().min(1.0));
    let mut s = C::new(0.0, 0.0);
    for (xj, wj) in x.iter().zip(&w) {
        let pt = tr.advance(xj / omega)?;
        s += pt.h.sin() * 0.5 * pt.dh * *wj;
    }
    Ok((C::i() * omega * g0).exp() * s / omega)
}

/// Diagnostics of one [`cheb_moment_detailed`] evaluation.
#[derive(Clone, Debug)]
pub struct ChebMoment {
    pub value: C,
    pub i1: C,
    pub i2: C,
    /// Largest `|phi(t(u)) - (u^3/3 - K u + eta)|` over the rule nodes.
    pub max_map_residual: f64,
    pub map: Option<ResonanceMap>,
}

/// Moment by the uniform rule on the mapped `I_1` and descent paths for the
/// endpoints and `I_2`; outside the `m` window the forward recursion is used.
pub fn cheb_moment(k: usize, omega: f64, n: usize) -> Result<C> {
    Ok(cheb_moment_detailed(k, omega, n, &StringEquations::default())?.value)
}

pub fn cheb_moment_detailed(k: usize, omega: f64, n: usize, source: &dyn CoefficientSource) -> Result<ChebMoment> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega = {omega} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let m = k as f64 / omega;
    if k <= 1 || !(m >= M_WINDOW.0 && m <= M_WINDOW.1) {
        let v = stable_recursion_moments(omega, k)?[k];
        return Ok(ChebMoment {
            value: v,
            i1: v,
            i2: C::new(0.0, 0.0),
            max_map_residual: 0.0,
            map: None,
        });
    }
    let (o1, o2) = split_integrals(k, omega);
    let map = cubic_normal_form(m)?;
    let params = crate::contours::OscillatorParams::new(omega, map.k_param);
    let rule = unsd_rule(params.delta, n, source)?;
    let scale = omega.powf(-1.0 / 3.0);
    let mut sum = C::new(0.0, 0.0);
    let mut max_res: f64 = 0.0;
    for (tn, wn) in rule.nodes.iter().zip(&rule.weights) {
        let u = tn * scale;
        let t = map.t_of_u(u)?;
        max_res = max_res.max(map.residual(u, t));
        sum += wn * t.sin() * map.jacobian(u, t);
    }
    let saddle = (C::i() * omega * map.eta).exp() * sum * scale * 0.5;
    let i1 = trig_endpoint(&o1, 0.0, n)? - trig_endpoint(&o1, PI, n)? + saddle;
    let i2 = trig_endpoint(&o2, 0.0, n)? - trig_endpoint(&o2, PI, n)?;
    Ok(ChebMoment {
        value: i1 + i2,
        i1,
        i2,
        max_map_residual: max_res,
        map: Some(map),
    })
}

/// Largest `k` the forward recursion is trusted for.
pub fn recursion_limit(omega: f64) -> usize {
    ((0.8 * omega).floor() as usize).max(1)
}

/// `M_0..M_kmax` by the forward recursion from the closed forms for `k = 0, 1`,
/// `2 M_k = (B - i omega M_{k+1})/(k+1) - (B - i omega M_{k-1})/(k-1)` with
/// `B = e^{i omega} - (-1)^{k+1} e^{-i omega}`.
pub fn stable_recursion_moments(omega: f64, kmax: usize) -> Result<Vec<C>> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!("omega = {omega} must be positive")));
    }
    let limit = recursion_limit(omega);
    if kmax > limit {
        return Err(Error::Unstable { kmax, limit });
    }
    let (s, c) = omega.sin_cos();
    let iw = C::new(0.0, omega);
    let e = C::new(c, s);
    let b = |j: usize| if j % 2 == 0 { e - e.conj() } else { e + e.conj() };
    let mut out = vec![C::new(2.0 * s / omega, 0.0)];
    if kmax >= 1 {
        out.push(C::new(0.0, 2.0 * (s / (omega * omega) - c / omega)));
    }
    if kmax >= 2 {
        out.push((b(2) - out[1] * 4.0) / iw);
    }
    for k in 2..kmax {
        let kf = k as f64;
        let bb = b(k + 1);
        let next = (bb * (1.0 / (kf + 1.0) - 1.0 / (kf - 1.0)) + iw * out[k - 1] / (kf - 1.0) - out[k] * 2.0)
            * (kf + 1.0)
            / iw;
        out.push(next);
    }
    Ok(out)
}

/// Reference moment by adaptive Gauss-Kronrod on the real axis with at
/// least `panels` initial panels.
pub fn oracle_moment(k: usize, omega: f64, panels: usize) -> Result<C> {
    let f = |x: f64| {
        let (mut t0, mut t1) = (1.0, x);
        let tk = if k == 0 {
            1.0
        } else {
            for _ in 1..k {
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        };
        C::new(0.0, omega * x).exp() * tk
    };
    Ok(real_integral(&f, -1.0, 1.0, panels, 1e-14)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddles_at_half() {
        let (tp, tm) = find_saddles(0.5);
        assert!((tm.re - PI / 6.0).abs() < 1e-15 && (tp.re - 5.0 * PI / 6.0).abs() < 1e-15);
        let (tp, _) = find_saddles(1.2);
        assert!((tp.im - 0.622_362_503_714_779).abs() < 1e-12);
    }

    #[test]
    fn coalescent_normal_form() {
        let r = cubic_normal_form(1.0).unwrap();
        assert_eq!(r.k_param, 0.0);
        assert!((r.eta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn saddle_values_match() {
        for &m in &[0.8, 1.2] {
            let r = cubic_normal_form(m).unwrap();
            let sk = C::new(r.k_param, 0.0).sqrt();
            // t(-sqrt K) = t_minus, t(+sqrt K) = t_plus
            let lhs = r.phi(r.t_minus);
            let rhs = r.cubic(-sk);
            assert!((lhs - rhs).norm() < 1e-12, "{m}: {lhs} {rhs}");
            let t = r.t_of_u(sk * 0.5).unwrap();
            assert!(r.residual(sk * 0.5, t) < 1e-12);
        }
    }

    #[test]
    fn closed_forms() {
        let m = stable_recursion_moments(100.0, 2).unwrap();
        assert!((m[0].re - 2.0 * 100f64.sin() / 100.0).abs() < 1e-15);
        assert!((cheb_moment(0, 37.0, 8).unwrap() - C::new(2.0 * 37f64.sin() / 37.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn recursion_matches_quadrature() {
        let m = stable_recursion_moments(100.0, 10).unwrap();
        let o = oracle_moment(10, 100.0, 200).unwrap();
        assert!((m[10] - o).norm() < 1e-10);
    }

    #[test]
    fn recursion_refuses_resonance() {
        assert!(matches!(
            stable_recursion_moments(100.0, 100),
            Err(Error::Unstable { .. })
        ));
    }
}
