//! Scan of `h_n(delta)` over a delta grid: sign changes locate the values of
//! delta where the monic orthogonal polynomial of degree n fails to exist.

use super::{determinants_checked_mp, determinants_mp};
use crate::error::Result;
use rayon::prelude::*;
use rug::Float;

/// Scan result for one order n.
#[derive(Clone, Debug)]
pub struct OrderScan {
    pub n: usize,
    /// Refined delta values where `D_n(-delta)` changes sign.
    pub zeros: Vec<f64>,
    /// Grid points where the value is zero or keeps fewer than 16 correct bits.
    pub unresolved: Vec<f64>,
    /// Smallest number of correct bits seen over the grid.
    pub min_correct_bits: f64,
}

#[derive(Clone, Debug)]
pub struct ExistenceReport {
    pub delta_grid: (f64, f64, f64),
    pub precision_bits: u32,
    pub orders: Vec<OrderScan>,
}

impl ExistenceReport {
    pub fn order(&self, n: usize) -> Option<&OrderScan> {
        self.orders.iter().find(|o| o.n == n)
    }
}

/// Scan `delta` over `[lo, hi]` with the given step for orders `1..=nmax`.
pub fn existence_scan(lo: f64, hi: f64, step: f64, nmax: usize, precision_bits: u32) -> Result<ExistenceReport> {
    let count = ((hi - lo) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| lo + i as f64 * step).collect();
    let samples: Vec<Result<(Vec<Float>, Vec<f64>)>> = grid
        .par_iter()
        .map(|&delta| {
            let x = Float::with_val(precision_bits, -delta);
            determinants_checked_mp(&x, nmax, precision_bits)
        })
        .collect();
    let samples: Vec<(Vec<Float>, Vec<f64>)> = samples.into_iter().collect::<Result<_>>()?;

    let orders = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let mut zeros = Vec::new();
            let mut unresolved = Vec::new();
            let mut min_bits = f64::INFINITY;
            for (i, (d, bits)) in samples.iter().enumerate() {
                min_bits = min_bits.min(bits[n]);
                if d[n].is_zero() || bits[n] < 16.0 {
                    unresolved.push(grid[i]);
                }
                if i > 0 {
                    let prev = &samples[i - 1].0[n];
                    if !prev.is_zero() && !d[n].is_zero() && prev.is_sign_negative() != d[n].is_sign_negative() {
                        zeros.push(refine(n, grid[i - 1], grid[i], precision_bits)?);
                    }
                }
            }
            Ok(OrderScan {
                n,
                zeros,
                unresolved,
                min_correct_bits: min_bits,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExistenceReport {
        delta_grid: (lo, hi, step),
        precision_bits,
        orders,
    })
}

fn refine(n: usize, mut a: f64, mut b: f64, prec: u32) -> Result<f64> {
    let sign = |delta: f64| -> Result<bool> {
        let x = Float::with_val(prec, -delta);
        Ok(determinants_mp(&x, n, prec)?[n].is_sign_negative())
    };
    let sa = sign(a)?;
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if sign(m)? == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_airy_zero_located() {
        let rep = existence_scan(2.3, 2.4, 0.01, 1, 128).unwrap();
        let z = &rep.order(1).unwrap().zeros;
        assert_eq!(z.len(), 1);
        assert!((z[0] - 2.338_107_410_459_767).abs() < 1e-12);
    }
}
