//! Adaptive Gauss-Kronrod (10/21) integration along piecewise-linear
//! complex contours, used as the reference value for every comparison.

use super::OscillatorParams;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

type C = Complex64;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], ..., XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// Integrand values below this modulus are treated as zero when truncating
/// infinite rays.
pub const TAIL_CUTOFF: f64 = 1e-18;
const MAX_PANELS: usize = 200_000;

/// Contour for [`oracle_integral`].
#[derive(Clone, Debug)]
pub enum OracleContour {
    /// Straight real segment `[a, b]`.
    Interval { a: f64, b: f64 },
    /// From `inf e^{5 i pi/6}` to `-X`, along `[-X, X]`, then to `inf e^{i pi/6}`,
    /// with `X = max(1, sqrt|c|)`.
    Gamma,
    /// Straight rays `inf e^{5 i pi/6} -> 0 -> inf e^{i pi/6}`.
    GammaPolyline,
    /// Finite polyline with optional infinite rays: the path comes in from
    /// `inf * incoming` to `points[0]`, and leaves `points[last]` towards
    /// `inf * outgoing` (directions are unit complex numbers).
    Polyline {
        points: Vec<C>,
        incoming: Option<C>,
        outgoing: Option<C>,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct OracleResult {
    pub value: C,
    pub error_estimate: f64,
    /// `int |f exp(i omega g)| |dz|`, the scale of rounding errors.
    pub l1_norm: f64,
    pub evaluations: usize,
}

/// A straight piece `z(s) = z0 + s dir`, `s in [s0, s1]`.
#[derive(Clone, Copy)]
struct Segment {
    z0: C,
    dir: C,
    s0: f64,
    s1: f64,
}

struct Panel {
    seg: usize,
    s0: f64,
    s1: f64,
    value: C,
    abs: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn kronrod<F: Fn(C) -> C + ?Sized>(h: &F, seg: &Segment, s0: f64, s1: f64) -> (C, f64, f64) {
    let mid = 0.5 * (s0 + s1);
    let half = 0.5 * (s1 - s0);
    let at = |x: f64| h(seg.z0 + seg.dir * (mid + half * x));
    let fc = at(0.0);
    let mut k = fc * WGK[10];
    let mut g = C::new(0.0, 0.0);
    let mut abs = fc.norm() * WGK[10];
    for j in 0..10 {
        let f1 = at(-XGK[j]);
        let f2 = at(XGK[j]);
        k += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let scale = seg.dir * half;
    let err = ((k - g) * scale).norm();
    (k * scale, abs * half * seg.dir.norm(), err)
}

/// Neumaier-compensated complex sum.
#[derive(Default)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add_real(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }
    fn add(&mut self, z: C) {
        Self::add_real(&mut self.re, z.re);
        Self::add_real(&mut self.im, z.im);
    }
    fn value(&self) -> C {
        C::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Length of an infinite ray from `z0` in direction `dir` after which the
/// integrand stays below [`TAIL_CUTOFF`].
fn ray_length<F: Fn(C) -> C + ?Sized>(h: &F, z0: C, dir: C) -> f64 {
    let small = |r: f64| {
        let v = h(z0 + dir * r).norm();
        v < TAIL_CUTOFF || !v.is_finite()
    };
    let mut r = 0.5;
    while r < 1e4 {
        if small(r) && small(1.25 * r) && small(1.6 * r) {
            return r;
        }
        r *= 1.25;
    }
    r
}

fn segments<F: Fn(C) -> C + ?Sized>(h: &F, params: &OscillatorParams, contour: &OracleContour) -> Vec<Segment> {
    let e1 = C::from_polar(1.0, PI / 6.0);
    let e5 = C::from_polar(1.0, 5.0 * PI / 6.0);
    let (points, incoming, outgoing) = match contour {
        OracleContour::Interval { a, b } => (vec![C::new(*a, 0.0), C::new(*b, 0.0)], None, None),
        OracleContour::Gamma => {
            let x = params.c.abs().sqrt().max(1.0);
            (vec![C::new(-x, 0.0), C::new(x, 0.0)], Some(e5), Some(e1))
        }
        OracleContour::GammaPolyline => (vec![C::new(0.0, 0.0)], Some(e5), Some(e1)),
        OracleContour::Polyline {
            points,
            incoming,
            outgoing,
        } => (points.clone(), *incoming, *outgoing),
    };
    let mut out = Vec::new();
    if let Some(d) = incoming {
        // traversed from infinity inwards: z = p0 + d (R - s)
        let r = ray_length(h, points[0], d);
        out.push(Segment {
            z0: points[0] + d * r,
            dir: -d,
            s0: 0.0,
            s1: r,
        });
    }
    for w in points.windows(2) {
        let len = (w[1] - w[0]).norm();
        if len > 0.0 {
            out.push(Segment {
                z0: w[0],
                dir: (w[1] - w[0]) / len,
                s0: 0.0,
                s1: len,
            });
        }
    }
    if let Some(d) = outgoing {
        let last = *points.last().expect("polyline needs a point");
        let r = ray_length(h, last, d);
        out.push(Segment {
            z0: last,
            dir: d,
            s0: 0.0,
            s1: r,
        });
    }
    out
}

/// `int f(z) exp(i omega (z^3/3 - c z)) dz` along `contour`, bisecting the
/// worst panel until the summed Kronrod-Gauss difference drops below
/// `tol |I|` (or a rounding floor of a few ulps of the L1 norm).
pub fn oracle_integral<F: Fn(C) -> C + ?Sized>(
    f: &F,
    params: &OscillatorParams,
    contour: &OracleContour,
    tol: f64,
) -> Result<OracleResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol = {tol} must be positive")));
    }
    if let OracleContour::Polyline { points, .. } = contour {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty polyline".into()));
        }
    }
    let omega = params.omega;
    let c = params.c;
    let h = |z: C| -> C {
        let phase = (z * z * z / 3.0 - z * c) * omega;
        let v = f(z) * (phase * C::i()).exp();
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C::new(0.0, 0.0)
        }
    };
    let segs = segments(&h, params, contour);
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    for (i, seg) in segs.iter().enumerate() {
        // start with panels of about one local oscillation
        let zmax = seg.z0.norm().max((seg.z0 + seg.dir * seg.s1).norm());
        let freq = omega * (zmax * zmax + c.abs()) + 1.0;
        let n0 = ((seg.s1 - seg.s0) * freq / PI).ceil().clamp(4.0, 4000.0) as usize;
        let w = (seg.s1 - seg.s0) / n0 as f64;
        for j in 0..n0 {
            let a = seg.s0 + j as f64 * w;
            let b = if j + 1 == n0 { seg.s1 } else { a + w };
            let (value, abs, err) = kronrod(&h, seg, a, b);
            evals += 21;
            heap.push(Panel {
                seg: i,
                s0: a,
                s1: b,
                value,
                abs,
                err,
            });
        }
    }
    let totals = |heap: &BinaryHeap<Panel>| {
        let mut s = CompensatedSum::default();
        let mut e = 0.0;
        let mut l1 = 0.0;
        for p in heap.iter() {
            s.add(p.value);
            e += p.err;
            l1 += p.abs;
        }
        (s.value(), e, l1)
    };
    let (mut value, mut err, mut l1) = totals(&heap);
    let mut since_refresh = 0;
    loop {
        let target = (tol * value.norm()).max(8.0 * f64::EPSILON * l1);
        if err <= target {
            break;
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::ToleranceNotMet {
                tol,
                estimate: err / value.norm().max(f64::MIN_POSITIVE),
            });
        }
        let worst = heap.pop().expect("nonempty");
        let seg = &segs[worst.seg];
        let mid = 0.5 * (worst.s0 + worst.s1);
        if !(mid > worst.s0 && mid < worst.s1) {
            return Err(Error::ToleranceNotMet {
                tol,
                estimate: err / value.norm().max(f64::MIN_POSITIVE),
            });
        }
        let (v1, a1, e1) = kronrod(&h, seg, worst.s0, mid);
        let (v2, a2, e2) = kronrod(&h, seg, mid, worst.s1);
        evals += 42;
        value += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        l1 += a1 + a2 - worst.abs;
        heap.push(Panel {
            seg: worst.seg,
            s0: worst.s0,
            s1: mid,
            value: v1,
            abs: a1,
            err: e1,
        });
        heap.push(Panel {
            seg: worst.seg,
            s0: mid,
            s1: worst.s1,
            value: v2,
            abs: a2,
            err: e2,
        });
        since_refresh += 1;
        if since_refresh == 64 {
            // recompute the running sums to avoid drift
            (value, err, l1) = totals(&heap);
            since_refresh = 0;
        }
    }
    let (value, err, l1) = totals(&heap);
    Ok(OracleResult {
        value,
        error_estimate: err,
        l1_norm: l1,
        evaluations: evals,
    })
}

/// Adaptive Gauss-Kronrod integral of `f` over the real interval `[a, b]`
/// (no oscillator), to relative tolerance `tol`.
pub fn real_integral<F: Fn(f64) -> C + ?Sized>(f: &F, a: f64, b: f64, panels: usize, tol: f64) -> Result<OracleResult> {
    let params = OscillatorParams {
        omega: 0.0,
        c: 0.0,
        delta: 0.0,
    };
    let h = |z: C| f(z.re);
    // panels guides the initial split; omega = 0 disables the frequency guess
    let w = (b - a) / panels.max(1) as f64;
    let points: Vec<C> = (0..=panels.max(1))
        .map(|j| C::new(if j == panels.max(1) { b } else { a + j as f64 * w }, 0.0))
        .collect();
    oracle_integral(
        &h,
        &params,
        &OracleContour::Polyline {
            points,
            incoming: None,
            outgoing: None,
        },
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_for_degree_31() {
        let seg = Segment {
            z0: C::new(0.0, 0.0),
            dir: C::new(1.0, 0.0),
            s0: -1.0,
            s1: 1.0,
        };
        let f = |z: C| z.powi(30);
        let (v, _, _) = kronrod(&f, &seg, -1.0, 1.0);
        assert!((v.re - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_on_real_line() {
        let p = OscillatorParams::new(1.0, 0.0);
        // int exp(i x^3/3) over the real line is 2 pi Ai(0)
        let r = oracle_integral(&|_z: C| C::new(1.0, 0.0), &p, &OracleContour::Gamma, 1e-13).unwrap();
        assert!((r.value - C::new(2.230_707_051_824_495_7, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn polyline_and_gamma_agree() {
        let p = OscillatorParams::new(3.0, 0.4);
        let f = |z: C| (z * 2.0).cos();
        let a = oracle_integral(&f, &p, &OracleContour::Gamma, 1e-13).unwrap();
        let b = oracle_integral(&f, &p, &OracleContour::GammaPolyline, 1e-13).unwrap();
        assert!((a.value - b.value).norm() < 1e-12 * a.value.norm());
    }
}
