//! Hypergeometric helpers: Kummer ₁F₁, ₁F₀ and the rising factorial.

use super::{Accumulator, SeriesControl};
use crate::error::domain;
use crate::{Error, Result};

/// Rising factorial (a)_n = a (a+1) … (a+n−1).
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// ₁F₀(k; ; z) = (1 − z)^{−k} for |z| < 1.
pub fn hypergeometric_1f0(k: f64, z: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(domain!("1F0 series requires |z| < 1, got {z}"));
    }
    Ok((-k * (-z).ln_1p()).exp())
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_1f1_with(a, b, z, &SeriesControl::default())
}

/// ₁F₁(a; b; z) by its term recurrence; negative z goes through Kummer's
/// transformation ₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z).
pub fn kummer_1f1_with(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || !z.is_finite() {
        return Err(domain!("1F1 requires finite arguments, got a={a}, b={b}, z={z}"));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(domain!("1F1 is undefined for nonpositive integer b={b}"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_series(b - a, b, -z, ctl)?);
    }
    kummer_series(a, b, z, ctl)
}

fn kummer_series(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut acc = Accumulator::default();
    let mut term = 1.0_f64;
    acc.add(term);
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((b + nf) * (nf + 1.0));
        term *= ratio;
        if term == 0.0 {
            // a is a nonpositive integer, the series terminates
            return Ok(acc.value());
        }
        acc.add(term);
        let sum = acc.value();
        if !sum.is_finite() {
            return Err(Error::Range(format!("1F1({a}; {b}; {z}) overflows")));
        }
        if term.abs() <= ctl.rel_tol * 1e-3 * sum.abs() && ratio.abs() < 0.5 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "1F1({a}; {b}; {z}) series exceeded {} terms",
        ctl.max_terms
    )))
}
