//! Small helpers on top of MPFR floats: a minimal complex type and
//! conversion utilities used by the extended-precision code paths.

use num_complex::Complex64;
use rug::Float;

/// Default working precision for a problem of order `n`.
pub fn default_precision(n: usize) -> u32 {
    64 + 12 * n as u32
}

pub fn float(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// Number of bits on which `a` and `b` agree, measured relative to `b`.
pub fn agreement_bits(a: &Float, b: &Float) -> f64 {
    if a == b {
        return f64::from(a.prec().max(b.prec()));
    }
    if b.is_zero() {
        return 0.0;
    }
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let rel = Float::with_val(prec, &diff / b).abs();
    let l = log2_abs(&rel);
    (-l).max(0.0)
}

/// log2 |x| without underflow; -inf for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    f64::from(e) + m.abs().log2()
}

/// Minimal complex number with MPFR components.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn zero(prec: u32) -> Self {
        MpComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        MpComplex {
            re: Float::with_val(prec, z.re),
            im: Float::with_val(prec, z.im),
        }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn mul(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        MpComplex {
            re: rr - ii,
            im: ri + ir,
        }
    }

    pub fn scale(&self, s: &Float) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let a = Float::with_val(p, self.re.square_ref());
        let b = Float::with_val(p, self.im.square_ref());
        a + b
    }

    pub fn div(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let d = o.norm_sqr();
        let conj = MpComplex {
            re: o.re.clone(),
            im: Float::with_val(p, -&o.im),
        };
        let num = self.mul(&conj);
        MpComplex {
            re: Float::with_val(p, &num.re / &d),
            im: Float::with_val(p, &num.im / &d),
        }
    }

    /// `self - i*a` for a real `a`.
    pub fn sub_i(&self, a: &Float) -> MpComplex {
        let p = self.prec();
        MpComplex {
            re: self.re.clone(),
            im: Float::with_val(p, &self.im - a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_roundtrip_arithmetic() {
        let a = MpComplex::from_c64(128, Complex64::new(1.5, -2.0));
        let b = MpComplex::from_c64(128, Complex64::new(-0.25, 3.0));
        let q = a.mul(&b).div(&b).to_c64();
        assert!((q - Complex64::new(1.5, -2.0)).norm() < 1e-30);
        let s = a.add(&b).sub(&b).to_c64();
        assert_eq!(s, Complex64::new(1.5, -2.0));
    }

    #[test]
    fn agreement_bits_counts_matching_prefix() {
        let a = Float::with_val(200, 1.0);
        let b = Float::with_val(200, 1.0) + Float::with_val(200, 2f64.powi(-40));
        let bits = agreement_bits(&a, &b);
        assert!((bits - 40.0).abs() < 0.1, "{bits}");
    }
}
