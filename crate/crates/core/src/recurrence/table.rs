//! Chebyshev tables of `Im alpha_k(delta)` and `beta_k(delta)` on
//! `[0, delta_max]`, with a TOML file format.

use super::scan::breakdown_scan;
use super::{string_coefficients, CoefficientSource, Method, RecurrenceCoefficients, StringEquations};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::Path;

pub const TABLE_FORMAT_VERSION: u32 = 1;

/// Chebyshev coefficients per index `k`, with `c_0` and `c_M` already halved
/// so that `f(delta) = sum_m c_m T_m(x)`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct TableEntry {
    pub k: usize,
    pub im_alpha_coeffs: Vec<f64>,
    pub beta_coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct RecurrenceTable {
    pub format_version: u32,
    pub delta_min: f64,
    pub delta_max: f64,
    pub nmax: usize,
    pub cheb_degree: usize,
    pub coefficients: Vec<TableEntry>,
}

/// Chebyshev-Lobatto nodes on `[0, delta_max]`, `j = 0..=m`.
pub(crate) fn lobatto_nodes(delta_max: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|j| 0.5 * delta_max * (1.0 + (std::f64::consts::PI * j as f64 / m as f64).cos()))
        .collect()
}

/// DCT-I of samples at the Lobatto nodes.
fn cheb_fit(values: &[f64]) -> Vec<f64> {
    let m = values.len() - 1;
    let mf = m as f64;
    (0..=m)
        .map(|k| {
            let mut s = 0.0;
            for (j, v) in values.iter().enumerate() {
                let w = if j == 0 || j == m { 0.5 } else { 1.0 };
                s += w * v * (std::f64::consts::PI * (k * j) as f64 / mf).cos();
            }
            let c = 2.0 * s / mf;
            if k == 0 || k == m {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

fn tail_ratio(c: &[f64]) -> f64 {
    let lead = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if lead == 0.0 {
        return 0.0;
    }
    let n = c.len();
    let tail = c[n - 2].abs().max(c[n - 1].abs());
    tail / lead
}

/// Build a table for `k <= nmax` with `m` Chebyshev intervals.
pub fn build_table(delta_max: f64, nmax: usize, m: usize, precision_bits: u32) -> Result<RecurrenceTable> {
    if !(delta_max > 0.0) {
        return Err(Error::InvalidArgument("delta_max must be positive".into()));
    }
    if m < 32 {
        return Err(Error::InvalidArgument(format!("Chebyshev degree {m} < 32")));
    }
    // coefficients up to index nmax are smooth only if D_1..D_{nmax+1} keep their sign
    let step = (delta_max / (4 * m) as f64).min(0.01);
    let scan_prec = precision_bits.min(64 + 12 * (nmax as u32 + 1));
    let pts = breakdown_scan(0.0, delta_max, step, nmax + 1, scan_prec)?;
    if !pts.is_empty() {
        return Err(Error::TableBreakdown {
            pairs: pts.iter().map(|p| (p.k, p.delta)).collect(),
        });
    }
    let nodes = lobatto_nodes(delta_max, m);
    let samples: Vec<RecurrenceCoefficients> = nodes
        .par_iter()
        .map(|&d| string_coefficients(d, nmax, precision_bits))
        .collect::<Result<_>>()
        .map_err(|e| match e {
            Error::Breakdown { index, delta, .. } => Error::TableBreakdown {
                pairs: vec![(index, delta)],
            },
            other => other,
        })?;
    let mut coefficients = Vec::with_capacity(nmax + 1);
    for k in 0..=nmax {
        let a: Vec<f64> = samples.iter().map(|c| c.alpha[k].im).collect();
        let b: Vec<f64> = samples.iter().map(|c| c.beta[k]).collect();
        let ca = cheb_fit(&a);
        let cb = cheb_fit(&b);
        for coeffs in [&ca, &cb] {
            let tail = tail_ratio(coeffs);
            if tail > 1e-14 {
                return Err(Error::Resolution { k, degree: m, tail });
            }
        }
        coefficients.push(TableEntry {
            k,
            im_alpha_coeffs: ca,
            beta_coeffs: cb,
        });
    }
    Ok(RecurrenceTable {
        format_version: TABLE_FORMAT_VERSION,
        delta_min: 0.0,
        delta_max,
        nmax,
        cheb_degree: m,
        coefficients,
    })
}

/// Evaluate the table at `delta` for indices `0..=n`.
pub fn eval_table(table: &RecurrenceTable, delta: f64, n: usize) -> Result<RecurrenceCoefficients> {
    if !(table.delta_min..=table.delta_max).contains(&delta) {
        return Err(Error::OutOfDomain {
            delta,
            delta_max: table.delta_max,
        });
    }
    if n > table.nmax {
        return Err(Error::InsufficientCoefficients {
            needed: n + 1,
            available: table.nmax + 1,
        });
    }
    let x = (2.0 * delta / table.delta_max - 1.0).clamp(-1.0, 1.0);
    let mut alpha = Vec::with_capacity(n + 1);
    let mut beta = Vec::with_capacity(n + 1);
    for e in &table.coefficients[..=n] {
        alpha.push(Complex64::new(0.0, clenshaw(&e.im_alpha_coeffs, x)));
        beta.push(if e.k == 0 { 0.0 } else { clenshaw(&e.beta_coeffs, x) });
    }
    let mu0 = crate::airy::moments(delta, 0, 64)?.mu[0];
    Ok(RecurrenceCoefficients {
        delta,
        alpha,
        beta,
        mu0,
        precision_bits: 53,
        method: Method::Table,
        extended: None,
        warnings: Vec::new(),
    })
}

impl RecurrenceTable {
    /// Values at the Lobatto nodes used for the fit.
    pub fn nodes(&self) -> Vec<f64> {
        lobatto_nodes(self.delta_max, self.cheb_degree)
    }

    pub fn to_toml(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let list = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        let _ = writeln!(s, "format_version = {}", self.format_version);
        let _ = writeln!(s, "delta_min = {}", num(self.delta_min));
        let _ = writeln!(s, "delta_max = {}", num(self.delta_max));
        let _ = writeln!(s, "nmax = {}", self.nmax);
        let _ = writeln!(s, "cheb_degree = {}", self.cheb_degree);
        for e in &self.coefficients {
            let _ = writeln!(s, "\n[[coefficients]]");
            let _ = writeln!(s, "k = {}", e.k);
            let _ = writeln!(s, "im_alpha_coeffs = [{}]", list(&e.im_alpha_coeffs));
            let _ = writeln!(s, "beta_coeffs = [{}]", list(&e.beta_coeffs));
        }
        s
    }

    pub fn from_toml(text: &str) -> Result<RecurrenceTable> {
        let t: RecurrenceTable = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if t.format_version != TABLE_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {}",
                t.format_version
            )));
        }
        if t.coefficients.len() != t.nmax + 1
            || t.coefficients.iter().enumerate().any(|(k, e)| {
                e.k != k || e.im_alpha_coeffs.len() != t.cheb_degree + 1 || e.beta_coeffs.len() != t.cheb_degree + 1
            })
        {
            return Err(Error::Format("coefficient arrays do not match nmax/cheb_degree".into()));
        }
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<RecurrenceTable> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// Table-backed source; falls back to the string equations outside the
/// table domain or beyond its `nmax`.
#[derive(Clone, Debug)]
pub struct TableSource {
    pub table: RecurrenceTable,
    pub fallback: StringEquations,
}

impl TableSource {
    pub fn new(table: RecurrenceTable) -> Self {
        TableSource {
            table,
            fallback: StringEquations::default(),
        }
    }
}

impl CoefficientSource for TableSource {
    fn coefficients(&self, delta: f64, nmax: usize) -> Result<RecurrenceCoefficients> {
        match eval_table(&self.table, delta, nmax) {
            Ok(c) => Ok(c),
            Err(Error::OutOfDomain { .. }) | Err(Error::InsufficientCoefficients { .. }) => {
                self.fallback.coefficients(delta, nmax)
            }
            Err(e) => Err(e),
        }
    }
}
