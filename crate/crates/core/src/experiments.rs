//! Parameter sweeps behind the benchmark CSV files and the acceptance suite.
//! Errors of the saddle-region methods are measured on the `Gamma`
//! contribution, against the oracle on the same contour.

use crate::cheb::{cheb_moment_detailed, oracle_moment};
use crate::contours::{nsd_gamma, oracle_integral, saddle_path_points, unsd_gamma, OracleContour, OscillatorParams};
use crate::error::Result;
use crate::gauss::{gauss_hermite, saddle_nodes_linear, unsd_rule};
use crate::recurrence::CoefficientSource;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt::Write as _;

type C = Complex64;

/// Built-in analytic test integrands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    One,
    X,
    Sin4x,
    SinCos,
}

impl TestFunction {
    pub const CATALOG: [&'static str; 4] = ["one", "x", "sin4x", "sincos"];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "one" => Some(Self::One),
            "x" => Some(Self::X),
            "sin4x" => Some(Self::Sin4x),
            "sincos" => Some(Self::SinCos),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::One => "one",
            Self::X => "x",
            Self::Sin4x => "sin4x",
            Self::SinCos => "sincos",
        }
    }

    pub fn eval(self, z: C) -> C {
        match self {
            Self::One => C::new(1.0, 0.0),
            Self::X => z,
            Self::Sin4x => (z * 4.0).sin(),
            Self::SinCos => z.sin() + z.cos(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleMethod {
    Unsd,
    Nsd,
}

impl SaddleMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Unsd => "unsd",
            Self::Nsd => "nsd",
        }
    }
}

/// One benchmark row.
#[derive(Clone, Copy, Debug)]
pub struct ErrorRow {
    pub omega: f64,
    pub c: f64,
    /// Total number of saddle-region points.
    pub n: usize,
    pub method: SaddleMethod,
    /// `NaN` when the method could not be applied (e.g. rule breakdown).
    pub abs_error: f64,
}

pub const ERROR_CSV_HEADER: &str = "omega,c,n,method,abs_error";

pub fn error_rows_to_csv(rows: &[ErrorRow]) -> String {
    let mut s = format!("{ERROR_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:e},{},{},{:.6e}",
            r.omega,
            r.c,
            r.n,
            r.method.name(),
            r.abs_error
        );
    }
    s
}

/// Reference value of the `Gamma` contribution.
pub fn gamma_oracle(f: TestFunction, params: &OscillatorParams) -> Result<C> {
    Ok(oracle_integral(&|z| f.eval(z), params, &OracleContour::Gamma, 1e-14)?.value)
}

/// Error of one method on `Gamma`. For NSD `n` counts points on both saddles.
pub fn gamma_error(
    f: TestFunction,
    params: &OscillatorParams,
    method: SaddleMethod,
    n: usize,
    source: &dyn CoefficientSource,
    reference: C,
) -> f64 {
    let g = |z: C| f.eval(z);
    let v = match method {
        SaddleMethod::Unsd => unsd_gamma(&g, params, n, source),
        SaddleMethod::Nsd => nsd_gamma(&g, params, n / 2),
    };
    match v {
        Ok(v) => (v - reference).norm(),
        Err(_) => f64::NAN,
    }
}

/// Errors at fixed `delta` (so `c = delta omega^{-2/3}`) over `omegas`.
pub fn err_vs_omega_fixed_delta(
    f: TestFunction,
    delta: f64,
    n: usize,
    omegas: &[f64],
    source: &dyn CoefficientSource,
) -> Result<Vec<ErrorRow>> {
    omegas
        .par_iter()
        .map(|&omega| {
            let p = OscillatorParams::from_delta(omega, delta);
            let r = gamma_oracle(f, &p)?;
            Ok(ErrorRow {
                omega,
                c: p.c,
                n,
                method: SaddleMethod::Unsd,
                abs_error: gamma_error(f, &p, SaddleMethod::Unsd, n, source, r),
            })
        })
        .collect()
}

/// Errors at fixed `c` over `omegas` for one method.
pub fn err_vs_omega_fixed_c(
    f: TestFunction,
    c: f64,
    method: SaddleMethod,
    n: usize,
    omegas: &[f64],
    source: &dyn CoefficientSource,
) -> Result<Vec<ErrorRow>> {
    omegas
        .par_iter()
        .map(|&omega| {
            let p = OscillatorParams::new(omega, c);
            let r = gamma_oracle(f, &p)?;
            Ok(ErrorRow {
                omega,
                c,
                n,
                method,
                abs_error: gamma_error(f, &p, method, n, source, r),
            })
        })
        .collect()
}

/// UNSD and NSD errors against `c` at fixed `omega`, `n` points in total.
pub fn err_vs_c(
    f: TestFunction,
    omega: f64,
    n: usize,
    cs: &[f64],
    source: &dyn CoefficientSource,
) -> Result<Vec<ErrorRow>> {
    let rows: Result<Vec<Vec<ErrorRow>>> = cs
        .par_iter()
        .map(|&c| {
            let p = OscillatorParams::new(omega, c);
            let r = gamma_oracle(f, &p)?;
            Ok([SaddleMethod::Unsd, SaddleMethod::Nsd]
                .iter()
                .map(|&method| ErrorRow {
                    omega,
                    c,
                    n,
                    method,
                    abs_error: gamma_error(f, &p, method, n, source, r),
                })
                .collect())
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// UNSD errors on a `c` grid for each `n` (the odd/even comparison).
pub fn odd_even(
    f: TestFunction,
    omega: f64,
    ns: &[usize],
    cs: &[f64],
    source: &dyn CoefficientSource,
) -> Result<Vec<ErrorRow>> {
    let refs: Result<Vec<C>> = cs
        .par_iter()
        .map(|&c| gamma_oracle(f, &OscillatorParams::new(omega, c)))
        .collect();
    let refs = refs?;
    let mut rows = Vec::new();
    for &n in ns {
        let part: Vec<ErrorRow> = cs
            .par_iter()
            .zip(refs.par_iter())
            .map(|(&c, &r)| {
                let p = OscillatorParams::new(omega, c);
                ErrorRow {
                    omega,
                    c,
                    n,
                    method: SaddleMethod::Unsd,
                    abs_error: gamma_error(f, &p, SaddleMethod::Unsd, n, source, r),
                }
            })
            .collect();
        rows.extend(part);
    }
    Ok(rows)
}

/// Least-squares slope of `log err` against `log x`.
pub fn loglog_slope(xs: &[f64], errs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(errs)
        .filter(|(_, e)| e.is_finite() && **e > 0.0)
        .map(|(x, e)| (x.ln(), e.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Median of the finite entries.
pub fn median(v: &[f64]) -> f64 {
    let mut w: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    if w.is_empty() {
        return f64::NAN;
    }
    w.sort_by(f64::total_cmp);
    let k = w.len();
    if k % 2 == 1 {
        w[k / 2]
    } else {
        0.5 * (w[k / 2 - 1] + w[k / 2])
    }
}

/// Comparison of the `2n`-point rule at large `delta` with two `n`-point
/// Hermite rules placed at the saddles `+-sqrt(delta)`.
#[derive(Clone, Debug)]
pub struct HermiteLimit {
    pub delta: f64,
    pub nodes: Vec<C>,
    pub hermite_nodes: Vec<C>,
    /// Largest node distance to the Hermite set, relative to its cluster width.
    pub max_relative_deviation: f64,
    /// The NSD nodes: Hermite nodes mapped onto the exact saddle paths (`omega = 1`).
    pub nsd_nodes: Vec<C>,
    /// Same measure against the NSD nodes.
    pub max_relative_deviation_nsd: f64,
}

pub fn hermite_limit(delta: f64, n_half: usize, source: &dyn CoefficientSource) -> Result<HermiteLimit> {
    let rule = unsd_rule(delta, 2 * n_half, source)?;
    let (xh, _) = gauss_hermite(n_half);
    let mut herm = saddle_nodes_linear(-delta.sqrt(), &xh);
    herm.extend(saddle_nodes_linear(delta.sqrt(), &xh));
    let mut nsd = Vec::new();
    for sign in [-1, 1] {
        nsd.extend(saddle_path_points(sign, delta, &xh)?.into_iter().map(|p| p.h));
    }
    let worst = cluster_deviation(&rule.nodes, &herm);
    let worst_nsd = cluster_deviation(&rule.nodes, &nsd);
    Ok(HermiteLimit {
        delta,
        nodes: rule.nodes,
        hermite_nodes: herm,
        max_relative_deviation: worst,
        nsd_nodes: nsd,
        max_relative_deviation_nsd: worst_nsd,
    })
}

/// Largest distance from a node to `reference`, relative to the width of
/// the node's cluster (clusters split by the sign of the real part).
fn cluster_deviation(nodes: &[C], reference: &[C]) -> f64 {
    let mut worst: f64 = 0.0;
    for side in [-1.0, 1.0] {
        let cluster: Vec<C> = nodes.iter().copied().filter(|t| t.re * side > 0.0).collect();
        let mut width: f64 = 0.0;
        for a in &cluster {
            for b in &cluster {
                width = width.max((a - b).norm());
            }
        }
        for t in &cluster {
            let d = reference.iter().map(|h| (h - t).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d / width);
        }
    }
    worst
}

/// One row of the Chebyshev benchmark.
#[derive(Clone, Copy, Debug)]
pub struct ChebRow {
    pub k: usize,
    pub m: f64,
    pub n: usize,
    pub rel_error: f64,
}

pub const CHEB_CSV_HEADER: &str = "k,m,n,rel_error";

pub fn cheb_rows_to_csv(rows: &[ChebRow]) -> String {
    let mut s = format!("{CHEB_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{:.6e}", r.k, r.m, r.n, r.rel_error);
    }
    s
}

/// Relative error of the Chebyshev moment at `k` and `omega = k/m`.
pub fn cheb_error(k: usize, m: f64, n: usize, source: &dyn CoefficientSource) -> Result<ChebRow> {
    let omega = k as f64 / m;
    let reference = oracle_moment(k, omega, 2500)?;
    let v = cheb_moment_detailed(k, omega, n, source)?.value;
    Ok(ChebRow {
        k,
        m,
        n,
        rel_error: (v - reference).norm() / reference.norm(),
    })
}

pub fn cheb_sweep(ks: &[usize], ms: &[f64], ns: &[usize], source: &dyn CoefficientSource) -> Result<Vec<ChebRow>> {
    let mut jobs = Vec::new();
    for &n in ns {
        for &m in ms {
            for &k in ks {
                jobs.push((k, m, n));
            }
        }
    }
    jobs.par_iter().map(|&(k, m, n)| cheb_error(k, m, n, source)).collect()
}
