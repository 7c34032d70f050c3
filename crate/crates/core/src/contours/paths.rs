//! Steepest-descent paths of `g(x) = x^3/3 - c x`, traced by Newton
//! continuation on the defining cubic.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

/// A point on a descent path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathPoint {
    pub p: f64,
    pub h: C,
    /// `dh/dp`
    pub dh: C,
}

pub fn phase(z: C, c: f64) -> C {
    z * z * z / 3.0 - z * c
}

/// Which sector the path escapes to: 0 at `5 pi/6`, 1 at `-pi/2`, 2 at `pi/6`.
pub fn valley_of(z: C) -> usize {
    let dirs = [5.0 * PI / 6.0, -PI / 2.0, PI / 6.0];
    let arg = z.arg();
    let dist = |t: f64| {
        let d = (arg - t).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    (0..3)
        .min_by(|&i, &j| dist(dirs[i]).total_cmp(&dist(dirs[j])))
        .expect("three valleys")
}

/// Phase `g` returning `(g(z), g'(z))`.
pub(crate) type PhaseFn<'a> = &'a dyn Fn(C) -> (C, C);

/// Continuation state for `g(h) = g0 + i q(p)`, with `q` and `q'` supplied.
pub(crate) struct Tracker<'a> {
    g: PhaseFn<'a>,
    g0: C,
    q: &'a dyn Fn(f64) -> (f64, f64),
    p: f64,
    h: C,
    step: f64,
}

impl<'a> Tracker<'a> {
    pub(crate) fn new(g: PhaseFn<'a>, g0: C, q: &'a dyn Fn(f64) -> (f64, f64), p0: f64, h0: C, step: f64) -> Self {
        Tracker {
            g,
            g0,
            q,
            p: p0,
            h: h0,
            step,
        }
    }

    pub(crate) fn set_point(&mut self, h: C) {
        self.h = h;
    }

    fn dh(&self, p: f64, h: C) -> C {
        let (_, dq) = (self.q)(p);
        C::i() * dq / (self.g)(h).1
    }

    pub(crate) fn newton(&self, p: f64, mut h: C) -> Option<(C, usize)> {
        let target = self.g0 + C::i() * (self.q)(p).0;
        for it in 0..12 {
            let (gv, d) = (self.g)(h);
            let fval = gv - target;
            if d.norm() == 0.0 {
                return None;
            }
            let s = fval / d;
            h -= s;
            if s.norm() <= 4.0 * f64::EPSILON * h.norm().max(1.0) {
                return Some((h, it));
            }
        }
        let fval = (self.g)(h).0 - target;
        if fval.norm() <= 1e-13 * target.norm().max(1.0) {
            Some((h, 12))
        } else {
            None
        }
    }

    /// Advance to `p_target` (either direction).
    pub(crate) fn advance(&mut self, p_target: f64) -> Result<PathPoint> {
        let sign = if p_target >= self.p { 1.0 } else { -1.0 };
        while (p_target - self.p) * sign > 0.0 {
            let remaining = (p_target - self.p).abs();
            let dp = self.step.min(remaining) * sign;
            let p1 = if self.step >= remaining { p_target } else { self.p + dp };
            // midpoint predictor
            let k1 = self.dh(self.p, self.h);
            let hm = self.h + k1 * (0.5 * dp);
            let k2 = self.dh(self.p + 0.5 * dp, hm);
            let pred = self.h + k2 * dp;
            match self.newton(p1, pred) {
                Some((h1, its)) if (h1 - pred).norm() <= 0.25 * (pred - self.h).norm() + 1e-12 * h1.norm().max(1.0) => {
                    self.p = p1;
                    self.h = h1;
                    if its <= 3 {
                        self.step *= 2.0;
                    }
                }
                _ => {
                    self.step *= 0.5;
                    if self.step < 1e-13 * (1.0 + self.p.abs()) {
                        return Err(Error::PathTracking(format!(
                            "step underflow at p = {:.6e}, h = {}",
                            self.p, self.h
                        )));
                    }
                }
            }
        }
        let dh = self.dh(self.p, self.h);
        Ok(PathPoint {
            p: self.p,
            h: self.h,
            dh,
        })
    }
}

pub(crate) fn linear_q(p: f64) -> (f64, f64) {
    (p, 1.0)
}

fn square_q(p: f64) -> (f64, f64) {
    (p * p, 2.0 * p)
}

/// Descent path from a real endpoint: `g(h(p)) = g(a) + i p`, `h(0) = a`.
pub fn endpoint_path(a: f64, c: f64, p: f64) -> Result<PathPoint> {
    let mut out = endpoint_path_points(a, c, &[p])?;
    Ok(out.remove(0))
}

/// Endpoint path evaluated at several parameters (any order) by a single
/// continuation sweep.
pub fn endpoint_path_points(a: f64, c: f64, ps: &[f64]) -> Result<Vec<PathPoint>> {
    if ps.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidArgument(
            "endpoint path parameter must be nonnegative".into(),
        ));
    }
    let h0 = C::new(a, 0.0);
    let gp = a * a - c;
    if gp == 0.0 {
        return Err(Error::PathTracking(format!("endpoint {a} is a stationary point")));
    }
    let g0 = phase(h0, c);
    let q: &dyn Fn(f64) -> (f64, f64) = &linear_q;
    let g = move |z: C| (phase(z, c), z * z - c);
    let step = 0.05 * gp.abs().max(1e-6).min(1.0);
    let mut tr = Tracker::new(&g, g0, q, 0.0, h0, step);
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&i, &j| ps[i].total_cmp(&ps[j]));
    let mut out = vec![
        PathPoint {
            p: 0.0,
            h: h0,
            dh: C::i() / gp
        };
        ps.len()
    ];
    for i in order {
        if ps[i] == 0.0 {
            continue;
        }
        out[i] = tr.advance(ps[i])?;
    }
    Ok(out)
}

/// Valley reached by the endpoint path from `a`.
pub fn endpoint_valley(a: f64, c: f64) -> Result<usize> {
    let scale = 1.0 + a.abs().powi(3) + c.abs().powf(1.5);
    let far = endpoint_path(a, c, 1e3 * scale)?;
    Ok(valley_of(far.h))
}

/// Direction `dh/dp(0) = sqrt(2i / g''(xi))` of the saddle path at `xi = sign sqrt(c)`.
pub fn saddle_direction(xi: f64) -> C {
    (C::new(0.0, 2.0) / (2.0 * xi)).sqrt()
}

/// Descent path through `xi = sign sqrt(c)`: `g(h(p)) = g(xi) + i p^2`.
pub fn saddle_path(sign: i32, c: f64, p: f64) -> Result<PathPoint> {
    let mut out = saddle_path_points(sign, c, &[p])?;
    Ok(out.remove(0))
}

/// Saddle path at several parameters of either sign.
pub fn saddle_path_points(sign: i32, c: f64, ps: &[f64]) -> Result<Vec<PathPoint>> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "saddle paths need c > 0 (got {c}); use the uniform rule"
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +-1, got {sign}")));
    }
    let xi = sign as f64 * c.sqrt();
    let d = saddle_direction(xi);
    let x0 = C::new(xi, 0.0);
    let g0 = phase(x0, c);
    let mut out = vec![PathPoint { p: 0.0, h: x0, dh: d }; ps.len()];
    // local radius where the quadratic approximation is good
    let p_seed = 1e-4 * c.powf(0.75);
    let q: &dyn Fn(f64) -> (f64, f64) = &square_q;
    let g = move |z: C| (phase(z, c), z * z - c);
    for dir in [1.0, -1.0] {
        let mut idx: Vec<usize> = (0..ps.len()).filter(|&i| ps[i] * dir > 0.0).collect();
        if idx.is_empty() {
            continue;
        }
        idx.sort_by(|&i, &j| (ps[i] * dir).total_cmp(&(ps[j] * dir)));
        // second-order seed from s^2 (xi + s/3) = i p^2: s = d p - d^2 p^2 / (6 xi)
        let p0 = dir * p_seed;
        let s1 = d * p0;
        let seed = x0 + s1 - s1 * s1 / (6.0 * xi);
        let mut tr = Tracker::new(&g, g0, q, p0, seed, p_seed);
        let h = tr
            .newton(p0, seed)
            .ok_or_else(|| Error::PathTracking("saddle seed did not converge".into()))?
            .0;
        tr.set_point(h);
        for i in idx {
            out[i] = if (ps[i] * dir) < p_seed {
                let s1 = d * ps[i];
                let h = x0 + s1 - s1 * s1 / (6.0 * xi);
                let dh = d - d * d * ps[i] / (3.0 * xi);
                PathPoint { p: ps[i], h, dh }
            } else {
                tr.advance(ps[i])?
            };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_zero_parameter_is_endpoint() {
        let p = endpoint_path(1.0, 0.25, 0.0).unwrap();
        assert_eq!(p.h, C::new(1.0, 0.0));
    }

    #[test]
    fn endpoint_residual() {
        let p = endpoint_path(1.0, 0.25, 1.0).unwrap();
        let r = phase(p.h, 0.25) - phase(C::new(1.0, 0.0), 0.25) - C::i();
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn endpoint_goes_to_pi_over_6() {
        let p = endpoint_path(1.0, 0.0, 1e6).unwrap();
        assert!((p.h.arg() - PI / 6.0).abs() < 1e-3);
        assert_eq!(endpoint_valley(-1.0, 0.0).unwrap(), 0);
        assert_eq!(endpoint_valley(-1.0, 2.0).unwrap(), 1);
    }

    #[test]
    fn saddle_direction_at_c1() {
        let p = saddle_path(1, 1.0, 0.0).unwrap();
        assert!((p.dh - C::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert_eq!(p.h, C::new(1.0, 0.0));
    }

    #[test]
    fn saddle_residual() {
        for &pp in &[2.0, -2.0, 1e-6, 0.3] {
            let p = saddle_path(1, 1.0, pp).unwrap();
            let r = phase(p.h, 1.0) - phase(C::new(1.0, 0.0), 1.0) - C::i() * pp * pp;
            assert!(r.norm() < 1e-12, "{pp}: {r}");
        }
    }

    #[test]
    fn saddle_requires_positive_c() {
        assert!(saddle_path(1, 0.0, 1.0).is_err());
        assert!(saddle_path(1, -1.0, 1.0).is_err());
    }
}
