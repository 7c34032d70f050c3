//! Classical and uniform steepest descent for
//! `int_a^b f(x) exp(i omega (x^3/3 - c x)) dx`.
//!
//! The integral over `[a, b]` is written as `I_a - I_b + W`, where `I_a` and
//! `I_b` run from the endpoints to infinity along their descent paths and `W`
//! connects the valleys the two paths end in. When the paths end in the
//! valleys at `5 pi/6` and `pi/6`, `W` is the integral over `Gamma`: two
//! Hermite saddle paths for NSD, a single complex Gaussian rule for UNSD.

mod oracle;
pub(crate) mod paths;

pub use oracle::{oracle_integral, real_integral, OracleContour, OracleResult, TAIL_CUTOFF};
pub use paths::{
    endpoint_path, endpoint_path_points, endpoint_valley, phase, saddle_direction, saddle_path, saddle_path_points,
    valley_of, PathPoint,
};

use crate::error::{Error, Result};
use crate::gauss::{apply_rule, gauss_hermite, gauss_laguerre, unsd_rule, QuadratureRule};
use crate::recurrence::CoefficientSource;
use num_complex::Complex64;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub c: f64,
    /// `c omega^{2/3}`
    pub delta: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, c: f64) -> Self {
        OscillatorParams {
            omega,
            c,
            delta: c * omega.powf(2.0 / 3.0),
        }
    }

    /// Parameters with `c = delta omega^{-2/3}`; `delta` is then recomputed
    /// from `c` so the defining relation holds exactly as evaluated.
    pub fn from_delta(omega: f64, delta: f64) -> Self {
        Self::new(omega, delta / omega.powf(2.0 / 3.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "omega = {} must be positive",
                self.omega
            )));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidArgument(format!("c = {} must be finite", self.c)));
        }
        Ok(())
    }
}

/// `I_a = int_{Gamma_a} f exp(i omega g)` from the endpoint to infinity by
/// n-point Gauss-Laguerre in `p = t / omega`, and the valley it ends in.
pub fn endpoint_contribution<F: Fn(C) -> C + ?Sized>(
    f: &F,
    params: &OscillatorParams,
    a: f64,
    n: usize,
) -> Result<(C, usize)> {
    params.validate()?;
    let omega = params.omega;
    let (x, w) = gauss_laguerre(n);
    let ps: Vec<f64> = x.iter().map(|t| t / omega).collect();
    let pts = endpoint_path_points(a, params.c, &ps)?;
    let mut s = C::new(0.0, 0.0);
    for (pt, wj) in pts.iter().zip(&w) {
        s += f(pt.h) * pt.dh * *wj;
    }
    let g0 = phase(C::new(a, 0.0), params.c);
    let value = (C::i() * omega * g0).exp() * s / omega;
    Ok((value, endpoint_valley(a, params.c)?))
}

/// Contribution of the saddle at `sign sqrt(c)` along its descent path,
/// oriented with increasing `p`, by n-point Gauss-Hermite in `p = s/sqrt(omega)`.
pub fn saddle_contribution<F: Fn(C) -> C + ?Sized>(f: &F, params: &OscillatorParams, sign: i32, n: usize) -> Result<C> {
    params.validate()?;
    let (x, w) = gauss_hermite(n);
    let sq = params.omega.sqrt();
    let ps: Vec<f64> = x.iter().map(|s| s / sq).collect();
    let pts = saddle_path_points(sign, params.c, &ps)?;
    let mut s = C::new(0.0, 0.0);
    for (pt, wj) in pts.iter().zip(&w) {
        s += f(pt.h) * pt.dh * *wj;
    }
    let xi = sign as f64 * params.c.sqrt();
    let g0 = phase(C::new(xi, 0.0), params.c);
    Ok((C::i() * params.omega * g0).exp() * s / sq)
}

/// `int_Gamma f exp(i omega g)` by classical NSD: the saddle at `-sqrt(c)`
/// runs from the `5 pi/6` valley to the `-pi/2` valley, the one at
/// `+sqrt(c)` from `-pi/2` to `pi/6`. Needs `c > 0`.
pub fn nsd_gamma<F: Fn(C) -> C + ?Sized>(f: &F, params: &OscillatorParams, n: usize) -> Result<C> {
    Ok(saddle_contribution(f, params, -1, n)? + saddle_contribution(f, params, 1, n)?)
}

/// `int_Gamma f exp(i omega g)` by the uniform rule with `delta = c omega^{2/3}`.
pub fn unsd_gamma<F: Fn(C) -> C + ?Sized>(
    f: &F,
    params: &OscillatorParams,
    n: usize,
    source: &dyn CoefficientSource,
) -> Result<C> {
    params.validate()?;
    let rule = unsd_rule(params.delta, n, source)?;
    Ok(apply_rule(&rule, f, params.omega))
}

/// As [`unsd_gamma`] with a prebuilt rule (its `delta` must match `params`).
pub fn unsd_gamma_with_rule<F: Fn(C) -> C + ?Sized>(f: &F, params: &OscillatorParams, rule: &QuadratureRule) -> C {
    apply_rule(rule, f, params.omega)
}

/// Connection between two valleys, expressed through the saddle pieces.
enum Connection {
    None,
    Gamma,
    Saddle(i32, f64),
}

fn connection(va: usize, vb: usize) -> Result<Connection> {
    Ok(match (va, vb) {
        (x, y) if x == y => Connection::None,
        (0, 2) => Connection::Gamma,
        (2, 0) => return Err(Error::InvalidArgument("interval must satisfy a < b".into())),
        (0, 1) => Connection::Saddle(-1, 1.0),
        (1, 0) => Connection::Saddle(-1, -1.0),
        (1, 2) => Connection::Saddle(1, 1.0),
        (2, 1) => Connection::Saddle(1, -1.0),
        _ => unreachable!("valley indices are 0..3"),
    })
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite a < b, got [{a}, {b}]")));
    }
    Ok(())
}

/// Classical NSD for `int_a^b f exp(i omega g)`: Gauss-Laguerre endpoint
/// paths and n-point Gauss-Hermite on each saddle path.
pub fn nsd_integral<F: Fn(C) -> C + ?Sized>(f: &F, params: &OscillatorParams, a: f64, b: f64, n: usize) -> Result<C> {
    check_interval(a, b)?;
    let (ia, va) = endpoint_contribution(f, params, a, n)?;
    let (ib, vb) = endpoint_contribution(f, params, b, n)?;
    let w = match connection(va, vb)? {
        Connection::None => C::new(0.0, 0.0),
        Connection::Gamma => nsd_gamma(f, params, n)?,
        Connection::Saddle(sign, orient) => saddle_contribution(f, params, sign, n)? * orient,
    };
    Ok(ia - ib + w)
}

/// UNSD for `int_a^b f exp(i omega g)`: endpoint paths as in NSD, the saddle
/// region by the `n_saddle`-point uniform rule.
pub fn unsd_integral<F: Fn(C) -> C + ?Sized>(
    f: &F,
    params: &OscillatorParams,
    a: f64,
    b: f64,
    n_saddle: usize,
    n_endpoint: usize,
    source: &dyn CoefficientSource,
) -> Result<C> {
    check_interval(a, b)?;
    let (ia, va) = endpoint_contribution(f, params, a, n_endpoint)?;
    let (ib, vb) = endpoint_contribution(f, params, b, n_endpoint)?;
    let w = match connection(va, vb)? {
        Connection::None => C::new(0.0, 0.0),
        Connection::Gamma => unsd_gamma(f, params, n_saddle, source)?,
        Connection::Saddle(sign, orient) => {
            // a single real saddle inside the interval: no coalescence to resolve
            saddle_contribution(f, params, sign, n_saddle)? * orient
        }
    };
    Ok(ia - ib + w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::StringEquations;

    fn one(_: C) -> C {
        C::new(1.0, 0.0)
    }

    #[test]
    fn params_delta() {
        let p = OscillatorParams::new(8.0, 0.5);
        assert!((p.delta - 2.0).abs() < 1e-15);
    }

    #[test]
    fn nsd_matches_oracle_for_constant() {
        let p = OscillatorParams::new(50.0, 0.5);
        let q = nsd_integral(&one, &p, -1.0, 1.0, 16).unwrap();
        let o = oracle_integral(&one, &p, &OracleContour::Interval { a: -1.0, b: 1.0 }, 1e-13).unwrap();
        assert!((q - o.value).norm() < 1e-8, "{q} {}", o.value);
    }

    #[test]
    fn unsd_zero_integrand() {
        let p = OscillatorParams::new(100.0, 0.0);
        let z = |_: C| C::new(0.0, 0.0);
        let q = unsd_integral(&z, &p, -1.0, 1.0, 6, 6, &StringEquations::default()).unwrap();
        assert_eq!(q, C::new(0.0, 0.0));
    }

    #[test]
    fn unsd_full_interval_sin4x() {
        let p = OscillatorParams::new(100.0, 0.0);
        let f = |z: C| (z * 4.0).sin();
        let q = unsd_integral(&f, &p, -1.0, 1.0, 12, 8, &StringEquations::default()).unwrap();
        let o = oracle_integral(&f, &p, &OracleContour::Interval { a: -1.0, b: 1.0 }, 1e-13).unwrap();
        assert!((q - o.value).norm() < 1e-8, "{q} {}", o.value);
    }
}
