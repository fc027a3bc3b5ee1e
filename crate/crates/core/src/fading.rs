//! The η–µ fading model.
//!
//! Both parameter formats map onto the pair (h, H):
//!
//! * Format 1, 0 < η < ∞: h = (2 + η⁻¹ + η)/4, H = (η⁻¹ − η)/4
//! * Format 2, −1 < η < 1: h = 1/(1 − η²), H = η/(1 − η²)
//!
//! and the instantaneous SNR density is
//!
//! ```text
//! p(γ) = 2√π µ^{µ+½} h^µ / (Γ(µ) H^{µ−½}) · γ^{µ−½} / γ̄^{µ+½} · e^{−2µhγ/γ̄} I_{µ−½}(2µHγ/γ̄)
//! ```
//!
//! The density depends on H only through |H|, because I_ν(z)/z^ν is even in z.

use crate::error::domain;
use crate::specfun::{ln_bessel_i, ln_gamma};
use crate::Result;

/// Below this Bessel argument the density uses the small-argument limit,
/// where H cancels analytically and the result is the Nakagami-2µ form.
pub const SMALL_BESSEL_ARGUMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FadingFormat {
    /// η is the in-phase / quadrature power ratio.
    Format1,
    /// η is the in-phase / quadrature correlation coefficient.
    Format2,
}

impl FadingFormat {
    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1 => Ok(FadingFormat::Format1),
            2 => Ok(FadingFormat::Format2),
            other => Err(domain!("fading format must be 1 or 2, got {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaMuParams {
    pub format: FadingFormat,
    pub eta: f64,
    pub mu: f64,
    pub h: f64,
    pub big_h: f64,
}

impl EtaMuParams {
    pub fn new(format: FadingFormat, eta: f64, mu: f64) -> Result<Self> {
        derive_params(format, eta, mu)
    }

    /// |H| / h, zero at the symmetric (Nakagami) point.
    pub fn asymmetry(&self) -> f64 {
        self.big_h.abs() / self.h
    }
}

/// Populates (h, H) from the format-specific η.
pub fn derive_params(format: FadingFormat, eta: f64, mu: f64) -> Result<EtaMuParams> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain!("mu must be finite and > 0, got {mu}"));
    }
    let (h, big_h) = match format {
        FadingFormat::Format1 => {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(domain!("format 1 requires 0 < eta < inf, got {eta}"));
            }
            let inv = 1.0 / eta;
            ((2.0 + inv + eta) / 4.0, (inv - eta) / 4.0)
        }
        FadingFormat::Format2 => {
            if !(eta > -1.0 && eta < 1.0) {
                return Err(domain!("format 2 requires -1 < eta < 1, got {eta}"));
            }
            let d = 1.0 - eta * eta;
            (1.0 / d, eta / d)
        }
    };
    Ok(EtaMuParams {
        format,
        eta,
        mu,
        h,
        big_h,
    })
}

/// ln p(γ); −∞ where the density vanishes.
pub fn ln_snr_pdf(gamma: f64, gamma_bar: f64, params: &EtaMuParams) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(domain!("SNR must be finite and >= 0, got {gamma}"));
    }
    if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
        return Err(domain!("average SNR must be finite and > 0, got {gamma_bar}"));
    }
    let EtaMuParams { mu, h, big_h, .. } = *params;
    let nu = mu - 0.5;
    let abs_h = big_h.abs();
    let ratio = gamma / gamma_bar;
    let z = 2.0 * mu * abs_h * ratio;

    // ln[2√π µ^{µ+½} h^µ / (Γ(µ) γ̄^{µ+½})] − 2µhγ/γ̄
    let base = (2.0 * std::f64::consts::PI.sqrt()).ln() + (mu + 0.5) * mu.ln() + mu * h.ln()
        - ln_gamma(mu)?
        - (mu + 0.5) * gamma_bar.ln()
        - 2.0 * mu * h * ratio;

    if z < SMALL_BESSEL_ARGUMENT {
        // γ^ν · (µγ/γ̄)^ν / Γ(µ + ½), i.e. I_ν(z)/|H|^ν at its leading order
        let power = if gamma == 0.0 {
            match nu.partial_cmp(&0.0) {
                Some(std::cmp::Ordering::Greater) => return Ok(f64::NEG_INFINITY),
                Some(std::cmp::Ordering::Equal) => 0.0,
                _ => return Ok(f64::INFINITY),
            }
        } else {
            nu * gamma.ln() + nu * (mu * ratio).ln()
        };
        return Ok(base + power - ln_gamma(mu + 0.5)?);
    }
    Ok(base + nu * gamma.ln() - nu * abs_h.ln() + ln_bessel_i(nu, z)?)
}

/// The η–µ SNR density at γ for average SNR γ̄ (linear scale).
pub fn snr_pdf(gamma: f64, gamma_bar: f64, params: &EtaMuParams) -> Result<f64> {
    ln_snr_pdf(gamma, gamma_bar, params).map(f64::exp)
}

/// Nakagami-m SNR density m^m γ^{m−1} e^{−mγ/γ̄} / (Γ(m) γ̄^m).
pub fn nakagami_snr_pdf(gamma: f64, gamma_bar: f64, m: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(gamma_bar > 0.0) || !(m > 0.0) {
        return Err(domain!(
            "nakagami density needs gamma >= 0, gamma_bar > 0, m > 0; got {gamma}, {gamma_bar}, {m}"
        ));
    }
    if gamma == 0.0 {
        return Ok(if m > 1.0 {
            0.0
        } else if m == 1.0 {
            1.0 / gamma_bar
        } else {
            f64::INFINITY
        });
    }
    let ln = m * m.ln() + (m - 1.0) * gamma.ln() - m * gamma / gamma_bar - ln_gamma(m)? - m * gamma_bar.ln();
    Ok(ln.exp())
}

/// How the H/h ratio enters the moment-based µ estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentRatioExponent {
    /// [1 + (H/h)²], the form that reproduces µ from exact moments.
    Squared,
    /// [1 + H/h]; kept for comparison, it does not round-trip.
    Linear,
}

/// µ = E²(R²) / (2 Var(R²)) · [1 + (H/h)²].
pub fn mu_from_moments(mean_r2: f64, var_r2: f64, params: &EtaMuParams) -> Result<f64> {
    mu_from_moments_with(mean_r2, var_r2, params, MomentRatioExponent::Squared)
}

pub fn mu_from_moments_with(
    mean_r2: f64,
    var_r2: f64,
    params: &EtaMuParams,
    exponent: MomentRatioExponent,
) -> Result<f64> {
    if !(mean_r2 > 0.0 && mean_r2.is_finite()) {
        return Err(domain!("E(R^2) must be finite and > 0, got {mean_r2}"));
    }
    if !(var_r2 > 0.0 && var_r2.is_finite()) {
        return Err(domain!("Var(R^2) must be finite and > 0, got {var_r2}"));
    }
    let ratio = params.big_h / params.h;
    let bracket = match exponent {
        MomentRatioExponent::Squared => 1.0 + ratio * ratio,
        MomentRatioExponent::Linear => 1.0 + ratio,
    };
    Ok(mean_r2 * mean_r2 / (2.0 * var_r2) * bracket)
}
