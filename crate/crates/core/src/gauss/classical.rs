//! Classical Gauss-Hermite and Gauss-Laguerre rules by the real symmetric
//! Golub-Welsch procedure, with a Newton polish of the nodes.

use nalgebra::{DMatrix, SymmetricEigen};

/// Orthonormal three-term data: diagonal `a_k`, off-diagonal `b_k = sqrt(beta_{k+1})`, mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = a[i];
        if i + 1 < n {
            j[(i, i + 1)] = b[i];
            j[(i + 1, i)] = b[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    // Newton on p_n via the orthonormal recurrence, then Christoffel weights
    let eval = |x: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut sum = p * p;
        for k in 0..n {
            let bk = if k == 0 { 0.0 } else { b[k - 1] };
            let bn = if k + 1 < n { b[k] } else { 1.0 };
            let next = ((x - a[k]) * p - bk * p_prev) / bn;
            let dnext = ((x - a[k]) * d + p - bk * d_prev) / bn;
            p_prev = p;
            p = next;
            d_prev = d;
            d = dnext;
            if k + 1 < n {
                sum += p * p;
            }
        }
        (p, d, sum)
    };
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, d, _) = eval(*x);
            if d == 0.0 {
                break;
            }
            let step = p / d;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    nodes.sort_by(f64::total_cmp);
    let weights = nodes.iter().map(|&x| 1.0 / eval(x).2).collect();
    (nodes, weights)
}

/// n-point Gauss-Hermite rule for the weight `exp(-x^2)` on the real line.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&a, &b, std::f64::consts::PI.sqrt())
}

/// n-point Gauss-Laguerre rule for the weight `exp(-x)` on `[0, inf)`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let b: Vec<f64> = (1..n).map(|k| k as f64).collect();
    golub_welsch(&a, &b, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_hermite() {
        let (x, w) = gauss_hermite(2);
        let r = 1.0 / 2f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
        assert!((w[0] - half_sqrt_pi).abs() < 1e-15);
    }

    #[test]
    fn laguerre_integrates_monomials() {
        let (x, w) = gauss_laguerre(8);
        // int x^k e^{-x} = k!
        let mut fact = 1.0;
        for k in 0..16 {
            if k > 0 {
                fact *= k as f64;
            }
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            assert!((s - fact).abs() < 1e-12 * fact, "k={k}");
        }
    }

    #[test]
    fn hermite_integrates_monomials() {
        let (x, w) = gauss_hermite(7);
        // int x^{2m} e^{-x^2} = Gamma(m + 1/2)
        let mut g = std::f64::consts::PI.sqrt();
        for m in 0..7 {
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(2 * m)).sum();
            assert!((s - g).abs() < 1e-13 * g, "m={m}");
            g *= m as f64 + 0.5;
        }
    }
}
