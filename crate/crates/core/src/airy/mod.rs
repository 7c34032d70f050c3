//! Airy function, its derivatives, the moments of the cubic oscillatory
//! weight, and the Airy/Hankel determinants.
//!
//! Everything is evaluated with MPFR floats. `Ai` and `Ai'` come from the
//! Maclaurin series (with enough guard bits to absorb the cancellation) or,
//! for large positive arguments, from the asymptotic expansion. Higher
//! derivatives follow from `Ai'' = x Ai`.

mod existence;
mod identities;

pub use existence::{existence_scan, ExistenceReport, OrderScan};
pub use identities::{verify_identities, IdentityReport};

use crate::error::{Error, Result};
use crate::mp::agreement_bits;
use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

/// Supported argument range for the Airy evaluations.
pub const AIRY_DOMAIN: (f64, f64) = (-50.0, 50.0);

/// Range accepted by the extended-precision internals (large-x checks of
/// the determinant asymptotics need more than the public range).
pub const EXTENDED_DOMAIN: (f64, f64) = (-200.0, 200.0);

/// Ai and its first `kmax` derivatives at a real point.
#[derive(Clone, Debug)]
pub struct AiryDerivatives {
    pub x: f64,
    /// `[Ai(x), Ai'(x), ..., Ai^(kmax)(x)]`
    pub values: Vec<f64>,
    pub precision_bits: u32,
}

/// Moments `mu_k = 2 pi (-i)^k Ai^(k)(-delta)` of the weight `exp(i(z^3/3 - delta z))`.
#[derive(Clone, Debug)]
pub struct MomentSequence {
    pub delta: f64,
    pub mu: Vec<Complex64>,
}

/// Airy determinants `D_0(x), ..., D_n(x)`.
#[derive(Clone, Debug)]
pub struct AiryDeterminants {
    pub x: f64,
    pub d: Vec<f64>,
    pub precision_bits: u32,
    /// Bits on which the working and doubled-precision evaluations agree.
    pub correct_bits: Vec<f64>,
}

fn check_range(x: f64, range: (f64, f64)) -> Result<()> {
    if !(range.0..=range.1).contains(&x) || x.is_nan() {
        return Err(Error::Domain {
            value: x,
            lo: range.0,
            hi: range.1,
        });
    }
    Ok(())
}

fn check_domain(x: f64) -> Result<()> {
    check_range(x, AIRY_DOMAIN)
}

/// `(Ai(x), Ai'(x))` at `prec` bits, relative error a few ulps away from zeros.
pub fn airy_pair_mp(x: &Float, prec: u32) -> Result<(Float, Float)> {
    let xf = x.to_f64();
    check_range(xf, EXTENDED_DOMAIN)?;
    if prec < 2 {
        return Err(Error::InvalidArgument("precision must be at least 2 bits".into()));
    }
    let zeta = if xf > 0.0 { 2.0 / 3.0 * xf.powf(1.5) } else { 0.0 };
    let (ai, aip) = if xf > 0.0 && zeta > 0.3466 * (f64::from(prec) + 16.0) {
        asymptotic_pair(x, prec + 16)
    } else {
        series_pair(x, prec)
    };
    Ok((Float::with_val(prec, ai), Float::with_val(prec, aip)))
}

fn series_pair(x: &Float, prec: u32) -> (Float, Float) {
    let xa = x.to_f64().abs();
    // terms grow like exp(zeta) while the result is exp(-zeta) for x > 0
    let growth = if x.is_sign_positive() { 4.0 / 3.0 } else { 2.0 / 3.0 };
    let guard = (growth * xa.powf(1.5) / std::f64::consts::LN_2).ceil() as u32;
    let wp = prec + guard + 32;

    let third = Float::with_val(wp, 1) / 3u32;
    let two_thirds = Float::with_val(wp, 2) / 3u32;
    let g13 = Float::with_val(wp, third.gamma_ref());
    let g23 = Float::with_val(wp, two_thirds.gamma_ref());
    // Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3)
    let c1 = Float::with_val(wp, 9).cbrt().recip() / &g23;
    let c2 = Float::with_val(wp, 3).cbrt().recip() / &g13;

    let x = Float::with_val(wp, x);
    let x3 = Float::with_val(wp, x.square_ref()) * &x;

    // f = sum x^{3k} / prod (3j-1)(3j), g = sum x^{3k+1} / prod (3j)(3j+1)
    let mut tf = Float::with_val(wp, 1);
    let mut tg = x.clone();
    let mut tfd = Float::with_val(wp, x.square_ref()) / 2u32; // k = 1 term of f'
    let mut tgd = Float::with_val(wp, 1);
    let mut f = tf.clone();
    let mut g = tg.clone();
    let mut fd = tfd.clone();
    let mut gd = tgd.clone();
    let mut biggest = 0.0f64;
    let eps = f64::from(wp);
    for k in 1u64.. {
        let k3 = 3 * k;
        tf *= &x3;
        tf /= (k3 - 1) * k3;
        tg *= &x3;
        tg /= k3 * (k3 + 1);
        tgd *= &x3;
        tgd /= (k3 - 2) * k3;
        if k >= 2 {
            tfd *= &x3;
            tfd /= (k3 - 3) * (k3 - 1);
        }
        f += &tf;
        g += &tg;
        gd += &tgd;
        if k >= 2 {
            fd += &tfd;
        }
        let size = [&tf, &tg, &tfd, &tgd]
            .iter()
            .map(|t| crate::mp::log2_abs(t))
            .fold(f64::NEG_INFINITY, f64::max);
        biggest = biggest.max(size);
        if k > 2 && (size < biggest - eps || size == f64::NEG_INFINITY) {
            break;
        }
    }
    let ai = Float::with_val(wp, &c1 * &f) - Float::with_val(wp, &c2 * &g);
    let aip = Float::with_val(wp, &c1 * &fd) - Float::with_val(wp, &c2 * &gd);
    (ai, aip)
}

fn asymptotic_pair(x: &Float, wp: u32) -> (Float, Float) {
    let x = Float::with_val(wp, x);
    let sqrt_x = Float::with_val(wp, x.sqrt_ref());
    let zeta = Float::with_val(wp, &x * &sqrt_x) * 2u32 / 3u32;
    let inv_zeta = Float::with_val(wp, zeta.recip_ref());
    let quarter = Float::with_val(wp, sqrt_x.sqrt_ref());
    let pi = Float::with_val(wp, Constant::Pi);
    let pref = Float::with_val(wp, -&zeta).exp() / (Float::with_val(wp, pi.sqrt_ref()) * 2u32);

    let mut u = Float::with_val(wp, 1);
    let mut sa = Float::with_val(wp, 1);
    let mut sd = Float::with_val(wp, 1);
    let mut zpow = Float::with_val(wp, 1);
    let mut last = f64::INFINITY;
    for k in 1u32..10_000 {
        let kk = f64::from(k);
        u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0);
        u /= (2.0 * kk - 1.0) * 216.0 * kk;
        let v = Float::with_val(wp, &u * (6.0 * kk + 1.0)) / (6.0 * kk - 1.0);
        zpow *= &inv_zeta;
        zpow = -zpow;
        let ta = Float::with_val(wp, &u * &zpow);
        let td = Float::with_val(wp, &v * &zpow);
        // v_k carries an extra minus sign relative to u_k
        sa += &ta;
        sd -= &td;
        let size = crate::mp::log2_abs(&ta);
        if size < -f64::from(wp) || size > last {
            break;
        }
        last = size;
    }
    let ai = Float::with_val(wp, &pref * &sa) / &quarter;
    let aip = -(Float::with_val(wp, &pref * &sd) * &quarter);
    (ai, aip)
}

/// Ai(x) rounded to double.
pub fn airy_ai(x: f64, precision_bits: u32) -> Result<f64> {
    check_precision(precision_bits)?;
    check_domain(x)?;
    let xf = Float::with_val(precision_bits, x);
    Ok(airy_pair_mp(&xf, precision_bits)?.0.to_f64())
}

fn check_precision(p: u32) -> Result<()> {
    if p < 53 {
        return Err(Error::InvalidArgument(format!("precision_bits = {p} < 53")));
    }
    Ok(())
}

/// `Ai^(k)(x)` for `k <= kmax` at `prec` bits.
pub fn airy_derivatives_mp(x: &Float, kmax: usize, prec: u32) -> Result<Vec<Float>> {
    // the recurrence can cancel for negative x; carry extra bits
    let wp = prec + 32 + kmax as u32;
    let (ai, aip) = airy_pair_mp(x, wp)?;
    let xw = Float::with_val(wp, x);
    let mut v: Vec<Float> = Vec::with_capacity(kmax + 1);
    v.push(ai);
    if kmax >= 1 {
        v.push(aip);
    }
    for k in 0..kmax.saturating_sub(1) {
        let mut next = Float::with_val(wp, &xw * &v[k]);
        if k >= 1 {
            next += Float::with_val(wp, &v[k - 1] * k as u32);
        }
        v.push(next);
    }
    Ok(v.into_iter().map(|f| Float::with_val(prec, f)).collect())
}

pub fn airy_derivatives(x: f64, kmax: usize, precision_bits: u32) -> Result<AiryDerivatives> {
    if kmax < 1 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    check_precision(precision_bits)?;
    check_domain(x)?;
    let xf = Float::with_val(precision_bits, x);
    let v = airy_derivatives_mp(&xf, kmax, precision_bits)?;
    Ok(AiryDerivatives {
        x,
        values: v.iter().map(Float::to_f64).collect(),
        precision_bits,
    })
}

/// `mu_k(delta)` for `k <= kmax`.
pub fn moments(delta: f64, kmax: usize, precision_bits: u32) -> Result<MomentSequence> {
    check_precision(precision_bits)?;
    check_domain(-delta)?;
    let x = Float::with_val(precision_bits, -delta);
    let v = airy_derivatives_mp(&x, kmax.max(1), precision_bits)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mu = (0..=kmax)
        .map(|k| {
            let a = two_pi * v[k].to_f64();
            match k % 4 {
                0 => Complex64::new(a, 0.0),
                1 => Complex64::new(0.0, -a),
                2 => Complex64::new(-a, 0.0),
                _ => Complex64::new(0.0, a),
            }
        })
        .collect();
    Ok(MomentSequence { delta, mu })
}

/// Determinant by LU with partial pivoting, consuming the matrix.
pub(crate) fn lu_det(mut a: Vec<Vec<Float>>, prec: u32) -> Float {
    let n = a.len();
    let mut det = Float::with_val(prec, 1);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                let ai = Float::with_val(prec, a[i][col].abs_ref());
                let aj = Float::with_val(prec, a[j][col].abs_ref());
                ai.partial_cmp(&aj).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[piv][col].is_zero() {
            return Float::new(prec);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= &a[col][col];
        for row in col + 1..n {
            let factor = Float::with_val(prec, &a[row][col] / &a[col][col]);
            for k in col + 1..n {
                let t = Float::with_val(prec, &factor * &a[col][k]);
                a[row][k] -= t;
            }
        }
    }
    det
}

/// Unvalidated `D_0..D_nmax` at `x` from derivatives already in hand.
pub(crate) fn determinants_from_derivatives(v: &[Float], nmax: usize, prec: u32) -> Vec<Float> {
    let mut d = Vec::with_capacity(nmax + 1);
    d.push(Float::with_val(prec, 1));
    for n in 1..=nmax {
        let m: Vec<Vec<Float>> = (0..n)
            .map(|j| (0..n).map(|k| Float::with_val(prec, &v[j + k])).collect())
            .collect();
        d.push(lu_det(m, prec));
    }
    d
}

/// `D_0..D_nmax` at `x` without the doubled-precision check.
pub fn determinants_mp(x: &Float, nmax: usize, prec: u32) -> Result<Vec<Float>> {
    let v = airy_derivatives_mp(x, 2 * nmax.max(1), prec)?;
    Ok(determinants_from_derivatives(&v, nmax, prec))
}

/// `D_0..D_nmax` at `x` evaluated at `prec` and `2 prec` bits. Returns the
/// doubled-precision values and the number of agreeing bits per entry.
pub fn determinants_checked_mp(x: &Float, nmax: usize, prec: u32) -> Result<(Vec<Float>, Vec<f64>)> {
    let lo = determinants_mp(x, nmax, prec)?;
    let hi = determinants_mp(x, nmax, 2 * prec)?;
    let bits = lo.iter().zip(&hi).map(|(a, b)| agreement_bits(a, b)).collect();
    Ok((hi, bits))
}

/// Validated determinants: fails when any entry keeps fewer than 16 bits.
pub fn determinants_validated_mp(x: &Float, nmax: usize, prec: u32) -> Result<Vec<Float>> {
    let (d, bits) = determinants_checked_mp(x, nmax, prec)?;
    if let Some((n, &b)) = bits.iter().enumerate().find(|(_, &b)| b < 16.0) {
        return Err(Error::PrecisionInsufficient {
            n,
            x: x.to_f64(),
            correct_bits: b,
        });
    }
    Ok(d.into_iter().map(|f| Float::with_val(prec, f)).collect())
}

pub fn airy_determinants(x: f64, nmax: usize, precision_bits: u32) -> Result<AiryDeterminants> {
    check_precision(precision_bits)?;
    check_domain(x)?;
    let xf = Float::with_val(precision_bits, x);
    let (d, bits) = determinants_checked_mp(&xf, nmax, precision_bits)?;
    if let Some((n, &b)) = bits.iter().enumerate().find(|(_, &b)| b < 16.0) {
        return Err(Error::PrecisionInsufficient { n, x, correct_bits: b });
    }
    Ok(AiryDeterminants {
        x,
        d: d.iter().map(Float::to_f64).collect(),
        precision_bits,
        correct_bits: bits,
    })
}

/// Sign `(-1)^{n(n-1)/2}`.
pub(crate) fn hankel_sign(n: usize) -> f64 {
    if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Hankel determinant of the moments, `h_n = (2 pi)^n (-1)^{n(n-1)/2} D_n(-delta)`.
pub fn hankel_det(delta: f64, n: usize, precision_bits: u32) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let d = airy_determinants(-delta, n, precision_bits)?;
    let scale = (2.0 * std::f64::consts::PI).powi(n as i32) * hankel_sign(n);
    Ok(Complex64::new(scale * d.d[n], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ai_at_zero_matches_gamma_constant() {
        let a = airy_ai(0.0, 64).unwrap();
        assert!((a - 0.355_028_053_887_817_2).abs() < 1e-16);
    }

    #[test]
    fn ai_near_first_zero_is_small() {
        assert!(airy_ai(-2.338_107_41, 64).unwrap().abs() <= 1e-7);
    }

    #[test]
    fn ai_large_argument_is_positive_and_tiny() {
        let a = airy_ai(40.0, 64).unwrap();
        // leading asymptotic term exp(-zeta)/(2 sqrt(pi) x^{1/4})
        let zeta = 2.0 / 3.0 * 40f64.powf(1.5);
        let lead = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * 40f64.powf(0.25));
        assert!(a > 0.0 && a < 1e-73);
        assert!((a / lead - 1.0).abs() < 1e-2);
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        // at 64 bits the asymptotic branch kicks in near x = 11.3
        for &x in &[11.5, 15.0, 20.0] {
            let xf = Float::with_val(300, x);
            let (a_ser, d_ser) = series_pair(&xf, 300);
            let (a_asy, d_asy) = asymptotic_pair(&xf, 80);
            let ra = (Float::with_val(300, &a_ser - &a_asy) / &a_ser).to_f64().abs();
            let rd = (Float::with_val(300, &d_ser - &d_asy) / &d_ser).to_f64().abs();
            assert!(ra < 1e-15 && rd < 1e-15, "x={x}: {ra} {rd}");
        }
    }

    #[test]
    fn derivative_values() {
        let d = airy_derivatives(0.0, 2, 64).unwrap();
        assert_eq!(d.values[2], 0.0);
        assert!((d.values[1] + 0.258_819_403_792_806_8).abs() < 1e-16);
        let d = airy_derivatives(1.0, 3, 64).unwrap();
        assert!((d.values[3] - (d.values[1] + d.values[0])).abs() < 1e-16);
    }

    #[test]
    fn moments_at_zero() {
        let m = moments(0.0, 1, 64).unwrap();
        // frozen from an independent 30-digit evaluation
        assert!((m.mu[0].re - 2.230_707_051_824_495_7).abs() < 1e-14);
        assert!((m.mu[1].im - 1.626_210_275_123_944_2).abs() < 1e-14);
        assert!(moments(2.338_107_41, 0, 64).unwrap().mu[0].norm() <= 1e-6);
    }

    #[test]
    fn small_determinants() {
        let d = airy_determinants(0.0, 2, 128).unwrap();
        assert_eq!(d.d[0], 1.0);
        assert!((d.d[1] - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((d.d[2] + 0.066_987_483_779_663_97).abs() < 1e-16);
        assert!(airy_determinants(5.0, 2, 128).unwrap().d[2] < 0.0);
    }

    #[test]
    fn hankel_values() {
        assert!((hankel_det(0.0, 1, 128).unwrap().re - 2.230_707_051_824_495_7).abs() < 1e-14);
        assert!(hankel_det(2.338_107_41, 1, 128).unwrap().norm() <= 1e-5);
        assert!((hankel_det(0.0, 2, 128).unwrap().re - 2.644_559_858_918_694_3).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(airy_ai(60.0, 64), Err(Error::Domain { .. })));
        assert!(airy_ai(0.0, 20).is_err());
    }
}
