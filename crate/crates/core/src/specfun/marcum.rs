//! Generalized Marcum Q-function of real order.
//!
//! Q_m(a, b) = e^{−a²/2} Σ_l (a²/2)^l / l! · 𝒢(m + l, b²/2), i.e. a Poisson
//! mixture of regularized upper incomplete gamma functions. The sum starts
//! below the Poisson mode and runs forward, so the gamma factors follow the
//! all-positive recurrence 𝒢(s + 1, x) = 𝒢(s, x) + x^s e^{−x} / Γ(s + 1).

use super::gamma::{ln_poisson_term, reg_upper_gamma};
use super::{Accumulator, SeriesControl};
use crate::error::domain;
use crate::{Error, Result};

pub fn marcum_q(m: f64, a: f64, b: f64) -> Result<f64> {
    marcum_q_with(m, a, b, &SeriesControl::default())
}

/// Q_m(a, b) for m > 0 and a, b ≥ 0.
///
/// Truncation on both sides of the Poisson mode is certified: since
/// 𝒢 ≤ 1 and 𝒢(m + l, x) is nondecreasing in l, the neglected mass of the
/// Poisson weights bounds the neglected part of the sum relative to the
/// retained part.
pub fn marcum_q_with(m: f64, a: f64, b: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(domain!("marcum_q requires a finite order m > 0, got {m}"));
    }
    if !(a >= 0.0) || !a.is_finite() || !(b >= 0.0) || !b.is_finite() {
        return Err(domain!("marcum_q requires finite a, b >= 0, got a={a}, b={b}"));
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    let x = 0.5 * b * b;
    if a == 0.0 {
        return reg_upper_gamma(m, x);
    }
    let lam = 0.5 * a * a;
    let ln_lam = lam.ln();
    let ln_x = x.ln();
    let cut = 1e-3 * ctl.rel_tol;

    // lowest index: Poisson mass strictly below `lo` is under `cut`
    let mut lo = lam.floor() as usize;
    let mut steps = 0usize;
    while lo > 0 {
        let prev = (lo - 1) as f64;
        let below = ln_poisson_term(prev, lam).exp() / (1.0 - prev / lam);
        if below <= cut {
            break;
        }
        lo -= 1;
        steps += 1;
        if steps > ctl.max_terms {
            return Err(convergence(m, a, b, ctl));
        }
    }

    let mut ln_w = ln_poisson_term(lo as f64, lam);
    let mut gamma_q = reg_upper_gamma(m + lo as f64, x)?;
    let mut ln_d = ln_poisson_term(m + lo as f64, x);
    let mut acc = Accumulator::default();
    for l in lo..lo + ctl.max_terms {
        let lf = l as f64;
        acc.add(ln_w.exp() * gamma_q);
        ln_w += ln_lam - (lf + 1.0).ln();
        if lf + 2.0 > lam {
            let tail = ln_w.exp() / (1.0 - lam / (lf + 2.0));
            let sum = acc.value();
            if tail <= cut * sum || tail < f64::MIN_POSITIVE {
                return Ok(sum.clamp(0.0, 1.0));
            }
        }
        gamma_q = (gamma_q + ln_d.exp()).min(1.0);
        ln_d += ln_x - (m + lf + 1.0).ln();
    }
    Err(convergence(m, a, b, ctl))
}

fn convergence(m: f64, a: f64, b: f64, ctl: &SeriesControl) -> Error {
    Error::Convergence(format!(
        "marcum_q({m}, {a}, {b}) needs more than {} terms",
        ctl.max_terms
    ))
}
