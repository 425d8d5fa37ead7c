//! Adaptive 1-D quadrature and the interference tail integral.
//!
//! [`integrate_adaptive`] is a globally adaptive Gauss-Kronrod (10/21 point)
//! scheme: the interval with the largest error estimate is bisected until the
//! summed estimate drops under the absolute tolerance. An infinite upper limit
//! is mapped onto `[0, 1)` with `t = a + v / (1 - v)`.
//!
//! The tail integrand `s t / (t^eta + s)` is the radial form of the Laplace
//! functional exponent for Rayleigh-faded interferers between two radii.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Default absolute tolerance for the tail integrals.
pub const DEFAULT_ABS_TOL: f64 = 1e-6;

/// Subdivision budget before [`integrate_adaptive`] gives up.
pub const MAX_SUBDIVISIONS: usize = 2000;

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_879_813,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of a successful adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral1D {
    pub lower: f64,
    /// `f64::INFINITY` for a half-infinite range.
    pub upper: f64,
    pub abs_tol: f64,
    pub value: f64,
    pub est_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One 21-point Kronrod evaluation with its embedded 10-point Gauss estimate.
/// Returns `(value, error, |f| integral)`.
fn gauss_kronrod_21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::invalid(format!("integrand is not finite at {x} (value {y})")))
        }
    };

    let fc = eval(center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * abs_half, res_asc * abs_half);
    Ok((res_k * half, err, res_abs * abs_half))
}

fn integrate_finite<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (value, error, _) = gauss_kronrod_21(&mut f, a, b)?;
    let mut total_value = value;
    let mut total_error = error;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });

    let mut subdivisions = 1;
    while total_error > abs_tol {
        // Error estimates at the rounding floor cannot be pushed lower.
        if total_error <= 100.0 * f64::EPSILON * total_value.abs() {
            break;
        }
        let worst = match heap.pop() {
            Some(seg) => seg,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= MAX_SUBDIVISIONS || mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Err(Error::Quadrature {
                lower: a,
                upper: b,
                value: total_value,
                est_error: total_error,
                abs_tol,
            });
        }
        let (v1, e1, _) = gauss_kronrod_21(&mut f, worst.a, mid)?;
        let (v2, e2, _) = gauss_kronrod_21(&mut f, mid, worst.b)?;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        subdivisions += 1;
    }
    // Re-sum to shed drift from the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok((value, error))
}

/// Integrates a fallible integrand over `[a, b]`, `b` possibly `+inf`.
///
/// Errors raised by the integrand are returned unchanged.
pub fn try_integrate_adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral1D>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !a.is_finite() || b.is_nan() || !(a < b) {
        return Err(Error::invalid(format!("integration range must satisfy finite a < b, got [{a}, {b}]")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::invalid(format!("absolute tolerance must be > 0, got {abs_tol}")));
    }
    let outcome = if b == f64::INFINITY {
        integrate_finite(
            |v| {
                let w = 1.0 - v;
                f(a + v / w).map(|y| if y == 0.0 { 0.0 } else { y / (w * w) })
            },
            0.0,
            1.0,
            abs_tol,
        )
    } else {
        integrate_finite(f, a, b, abs_tol)
    };
    let (value, est_error) = outcome.map_err(|e| match e {
        Error::Quadrature { value, est_error, abs_tol, .. } => Error::Quadrature {
            lower: a,
            upper: b,
            value,
            est_error,
            abs_tol,
        },
        other => other,
    })?;
    Ok(Integral1D {
        lower: a,
        upper: b,
        abs_tol,
        value,
        est_error,
    })
}

/// Integrates `f` over `[a, b]`, `b` possibly `+inf`, to absolute tolerance `abs_tol`.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral1D>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_adaptive(|t| Ok(f(t)), a, b, abs_tol)
}

/// `s t / (t^eta + s)`, equal to `s t^(1-eta) / (1 + s t^-eta)` for `t > 0`
/// without overflowing `t^-eta` near the origin.
#[inline]
pub fn tail_integrand(s: f64, eta: f64, t: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let denom = t.powf(eta) + s;
    if denom.is_infinite() {
        return 0.0;
    }
    s * t / denom
}

fn check_tail_args(s: f64, eta: f64, a: f64, b: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("tail parameter s must be finite and >= 0, got {s}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("path-loss exponent must be > 0, got {eta}")));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::invalid(format!("lower radius must be finite and >= 0, got {a}")));
    }
    if b.is_nan() || b < a {
        return Err(Error::invalid(format!("upper radius {b} is below lower radius {a}")));
    }
    if b == f64::INFINITY && eta <= 2.0 {
        return Err(Error::Divergent { lower: a, eta });
    }
    Ok(())
}

/// `integral_a^b s t / (t^eta + s) dt` by adaptive quadrature.
///
/// `b = +inf` is only accepted for `eta > 2`; the integral diverges otherwise.
pub fn tail_integral(s: f64, eta: f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    check_tail_args(s, eta, a, b)?;
    if s == 0.0 || a == b {
        return Ok(0.0);
    }
    if b < f64::INFINITY {
        let integral = integrate_adaptive(|t| tail_integrand(s, eta, t), a, b, abs_tol)?;
        return Ok(integral.value.max(0.0));
    }

    // [c, inf) under t = c u^-q with q = 1/(eta - 2): the integrand becomes
    // s q c^2 / (c^eta + s u^(q eta)) on (0, 1], bounded and smooth.
    let (c, head, tol) = if a > 0.0 {
        (a, 0.0, abs_tol)
    } else {
        let head = integrate_adaptive(|t| tail_integrand(s, eta, t), 0.0, 1.0, 0.5 * abs_tol)?.value;
        (1.0, head, 0.5 * abs_tol)
    };
    let q = 1.0 / (eta - 2.0);
    let c_eta = c.powf(eta);
    let numer = s * q * c * c;
    let power = q * eta;
    let far = integrate_adaptive(|u| numer / (c_eta + s * u.powf(power)), 0.0, 1.0, tol)?;
    Ok((head + far.value).max(0.0))
}

/// Closed form of [`tail_integral`] for `eta = 4` (any `b`) and `eta = 2` (finite `b`).
///
/// * `eta = 4`: `(sqrt(s)/2) [atan(t^2 / sqrt(s))]_a^b`
/// * `eta = 2`: `(s/2) [ln(t^2 + s)]_a^b`
pub fn tail_integral_closed_form(s: f64, eta: f64, a: f64, b: f64) -> Result<f64> {
    if eta != 2.0 && eta != 4.0 {
        return Err(Error::invalid(format!("closed form only exists for eta in {{2, 4}}, got {eta}")));
    }
    check_tail_args(s, eta, a, b)?;
    if s == 0.0 || a == b {
        return Ok(0.0);
    }
    let value = if eta == 4.0 {
        let root = s.sqrt();
        let x = a * a / root;
        // atan(y) - atan(x) rewritten to keep precision when both are near pi/2.
        let diff = if b == f64::INFINITY {
            if x == 0.0 {
                FRAC_PI_2
            } else {
                (1.0 / x).atan()
            }
        } else {
            let y = b * b / root;
            ((y - x) / (1.0 + x * y)).atan()
        };
        0.5 * root * diff
    } else {
        0.5 * s * ((b * b - a * a) / (a * a + s)).ln_1p()
    };
    Ok(value.max(0.0))
}
