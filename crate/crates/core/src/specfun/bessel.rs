//! Modified Bessel function of the first kind for real order ν ≥ −½.

use super::gamma::ln_gamma_pos;
use super::SeriesControl;
use crate::error::domain;
use crate::{Error, Result};

/// Largest argument accepted by the ascending series.
const SERIES_Z_MAX: f64 = 700.0;

/// I_ν(z) by the ascending power series with the default [`SeriesControl`].
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    bessel_i_with(nu, z, &SeriesControl::default())
}

/// I_ν(z) = Σ_k (z/2)^{2k+ν} / (k! Γ(k+ν+1)).
///
/// Arguments beyond z = 700 are rejected with [`Error::Range`]; use
/// [`ln_bessel_i`] there.
pub fn bessel_i_with(nu: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    check_args(nu, z)?;
    if z > SERIES_Z_MAX {
        return Err(Error::Range(format!(
            "bessel_i series is limited to z <= {SERIES_Z_MAX}, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let lead = (nu * (0.5 * z).ln() - ln_gamma_pos(nu + 1.0)).exp();
    Ok(lead * reduced_series(nu, z, ctl)?)
}

/// ln I_ν(z) for z > 0.
///
/// Uses the ascending series up to z = 700 and the large-argument Hankel
/// expansion beyond, where the series would overflow.
pub fn ln_bessel_i(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    if z <= SERIES_Z_MAX {
        let ctl = SeriesControl::default();
        return Ok(nu * (0.5 * z).ln() - ln_gamma_pos(nu + 1.0) + reduced_series(nu, z, &ctl)?.ln());
    }
    // I_ν(z) ~ e^z / √(2πz) · Σ_k (−1)^k a_k(ν) / z^k
    let four_nu2 = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (four_nu2 - odd * odd) / (8.0 * k as f64 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Ok(z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + sum.ln());
        }
    }
    Err(Error::Range(format!(
        "asymptotic expansion of I_{nu}({z}) does not reach full precision"
    )))
}

fn check_args(nu: f64, z: f64) -> Result<()> {
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(domain!("bessel_i requires order nu >= -1/2, got {nu}"));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain!("bessel_i requires a finite z >= 0, got {z}"));
    }
    Ok(())
}

/// Σ_k (z²/4)^k Γ(ν+1) / (k! Γ(k+ν+1)); all terms are positive.
fn reduced_series(nu: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=ctl.max_terms {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        // terms decrease once k(k+ν) > z²/4
        if term <= ctl.rel_tol * 1e-3 * sum && kf * (kf + nu) > q {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "bessel_i series for nu={nu}, z={z} exceeded {} terms",
        ctl.max_terms
    )))
}
