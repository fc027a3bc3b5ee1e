//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The error estimate of each panel is the raw difference between the
//! Kronrod and embedded Gauss results, which overestimates the error of the
//! returned Kronrod value on smooth integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::domain;
use crate::{Error, Result};

/// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
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
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for XGK[1], XGK[3], …, XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadOptions {
    pub fn absolute(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol: 0.0,
            max_subdivisions: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// ∫|f| by the Kronrod rule, used for the roundoff floor
    mass: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[10];
    let mut mass = fc.abs() * WGK[10];
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let (lo, hi) = (f(center - dx)?, f(center + dx)?);
        let pair = lo + hi;
        kronrod += w * pair;
        mass += w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    if !value.is_finite() {
        return Err(Error::Convergence(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel {
        a,
        b,
        value,
        error,
        mass: mass * half.abs(),
    })
}

/// Integrates `f` over the interval spanned by `breaks` (sorted, at least two points).
///
/// Every consecutive pair of break points starts as its own panel; the panel
/// with the largest error estimate is bisected until the summed estimate is
/// below `max(abs_tol, rel_tol·|value|)`, or until it is within roundoff of
/// ∫|f| (tolerances finer than the arithmetic can deliver are not an error).
pub fn integrate<F>(f: F, breaks: &[f64], opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(domain!("integration needs at least two break points"));
    }
    if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|x| !x.is_finite()) {
        return Err(domain!("break points must be finite and strictly increasing"));
    }
    if !(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0) {
        return Err(domain!("quadrature needs a positive tolerance"));
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        heap.push(kronrod21(&f, w[0], w[1])?);
        evaluations += 21;
    }
    // panels too narrow to split further
    let mut settled: Vec<Panel> = Vec::new();

    for _ in 0..opts.max_subdivisions {
        let (value, error, mass) = totals(&heap, &settled);
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()).max(ROUNDOFF * mass) {
            return Ok(QuadResult {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(QuadResult {
                value,
                abs_error: error,
                evaluations,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * mid.abs() {
            settled.push(worst);
            continue;
        }
        heap.push(kronrod21(&f, worst.a, mid)?);
        heap.push(kronrod21(&f, mid, worst.b)?);
        evaluations += 42;
    }
    let (value, error, _) = totals(&heap, &settled);
    Err(Error::Convergence(format!(
        "quadrature reached {} subdivisions with estimated error {error:e} (value {value})",
        opts.max_subdivisions
    )))
}

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

fn totals(heap: &BinaryHeap<Panel>, settled: &[Panel]) -> (f64, f64, f64) {
    let mut value = crate::specfun::Accumulator::default();
    let mut error = 0.0;
    let mut mass = 0.0;
    for p in heap.iter().chain(settled) {
        value.add(p.value);
        error += p.error;
        mass += p.mass;
    }
    (value.value(), error, mass)
}

/// Smallest point past `start` beyond which the decreasing `envelope` stays below `threshold`.
///
/// Steps geometrically outward; `envelope` must be unimodal with its mode at or
/// before `start`.
pub fn tail_cutoff<E>(envelope: E, start: f64, threshold: f64) -> Result<f64>
where
    E: Fn(f64) -> f64,
{
    let mut x = start.max(1e-3);
    for _ in 0..4000 {
        if envelope(x) < threshold {
            return Ok(x);
        }
        x *= 1.05;
    }
    Err(Error::Convergence(format!(
        "integrand envelope did not fall below {threshold:e}"
    )))
}
