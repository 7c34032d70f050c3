//! Eigenvalues of a complex upper-Hessenberg matrix by the shifted QR
//! iteration with Wilkinson shifts and Givens rotations.

use crate::error::{Error, Result};
use num_complex::Complex64;

type C = Complex64;

/// Eigenvalues of the complex symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal.
pub fn tridiagonal_eigenvalues(diag: &[C], off: &[C]) -> Result<Vec<C>> {
    let n = diag.len();
    let mut h = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        h[i][i] = diag[i];
        if i + 1 < n {
            h[i][i + 1] = off[i];
            h[i + 1][i] = off[i];
        }
    }
    hessenberg_eigenvalues(h)
}

fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    // eigenvalue of [[a, b], [c, d]] closer to d
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Eigenvalues of an upper-Hessenberg matrix (consumed).
pub fn hessenberg_eigenvalues(mut h: Vec<Vec<C>>) -> Result<Vec<C>> {
    let n = h.len();
    let mut eig = vec![C::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        // deflation search
        let mut lo = hi;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if h[lo][lo - 1].norm() <= eps * s.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = C::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 60 * n {
            return Err(Error::EigenConvergence { n });
        }
        let mut mu = wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        if iter % 11 == 10 {
            // exceptional shift to break cycles
            mu = h[hi][hi] + C::new(0.75, 0.5) * h[hi][hi - 1].norm();
        }
        for k in lo..=hi {
            h[k][k] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (C::new(1.0, 0.0), C::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let u = h[k][j];
                let v = h[k + 1][j];
                h[k][j] = c.conj() * u + s.conj() * v;
                h[k + 1][j] = -s * u + c * v;
            }
            rots.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rots[idx];
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let u = h[i][k];
                let v = h[i][k + 1];
                h[i][k] = u * c + v * s;
                h[i][k + 1] = -u * s.conj() + v * c.conj();
            }
        }
        for k in lo..=hi {
            h[k][k] += mu;
        }
    }
    Ok(eig)
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Option<Vec<C>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 {
            return None;
        }
        a.swap(piv, col);
        b.swap(piv, col);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}
