//! Localization of coefficient breakdowns through the sign of
//! `D_k(-delta) = prod_{j<=k} r_j`, with `r_1 = Ai(-delta)` and
//! `r_{j+1} = -beta_j r_j` taken from the string equations.

use super::string::run;
use crate::error::Result;
use rayon::prelude::*;

/// A value of delta where `D_k(-delta)` vanishes, so the degree-k monic
/// orthogonal polynomial does not exist there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BreakdownPoint {
    pub k: usize,
    pub delta: f64,
}

/// Signs (true = negative) of `D_1..D_kmax` at `-delta`; `None` when a
/// value is not finite.
fn signs(delta: f64, kmax: usize, prec: u32) -> Result<Vec<Option<bool>>> {
    let r = run(delta, kmax.saturating_sub(1), prec)?;
    let mut out = Vec::with_capacity(kmax);
    let mut r_neg = r.ai.is_sign_negative();
    let mut d_neg = r_neg;
    let mut ok = !r.ai.is_zero();
    out.push(if ok { Some(d_neg) } else { None });
    for j in 1..kmax {
        let b = &r.beta[j];
        ok = ok && b.is_finite() && !b.is_zero();
        // r_{j+1} = -beta_j r_j
        r_neg = !(b.is_sign_negative() ^ r_neg);
        d_neg ^= r_neg;
        out.push(if ok { Some(d_neg) } else { None });
    }
    Ok(out)
}

/// Scan `[lo, hi]` with `step` for zeros of `D_k(-delta)`, `1 <= k <= kmax`.
pub fn breakdown_scan(lo: f64, hi: f64, step: f64, kmax: usize, precision_bits: u32) -> Result<Vec<BreakdownPoint>> {
    let count = ((hi - lo) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| lo + i as f64 * step).collect();
    let all: Vec<Vec<Option<bool>>> = grid
        .par_iter()
        .map(|&d| signs(d, kmax, precision_bits))
        .collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for i in 1..grid.len() {
        for k in 1..=kmax {
            if let (Some(a), Some(b)) = (all[i - 1][k - 1], all[i][k - 1]) {
                if a != b {
                    brackets.push((k, grid[i - 1], grid[i], a));
                }
            }
        }
    }
    let mut points: Vec<BreakdownPoint> = brackets
        .par_iter()
        .map(|&(k, mut a, mut b, sa)| {
            for _ in 0..55 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                match signs(m, k, precision_bits)?[k - 1] {
                    Some(s) if s == sa => a = m,
                    _ => b = m,
                }
            }
            Ok(BreakdownPoint {
                k,
                delta: 0.5 * (a + b),
            })
        })
        .collect::<Result<_>>()?;
    points.sort_by(|x, y| x.k.cmp(&y.k).then(x.delta.total_cmp(&y.delta)));
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_breakdown_is_airy_zero() {
        let pts = breakdown_scan(2.0, 2.5, 0.01, 1, 128).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].delta - 2.338_107_410_459_767).abs() < 1e-10);
    }
}
