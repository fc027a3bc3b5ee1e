//! Energy detection over AWGN and η–µ fading.
//!
//! With time-bandwidth product u and threshold λ,
//!
//! * P_f = 𝒢(u, λ/2)
//! * P_d(γ) = Q_u(√(2γ), √λ)
//! * P̄_d = ∫₀^∞ Q_u(√(2γ), √λ) p(γ) dγ
//!
//! For integer µ the Bessel factor of the η–µ density is a finite
//! combination of exponentials,
//!
//! ```text
//! I_{µ−½}(z) = (2πz)^{−½} Σ_{l<µ} c_l (2z)^{−l} [(−1)^l e^{z} + (−1)^µ e^{−z}],
//! c_l = Γ(µ+l) / (l! Γ(µ−l)),
//! ```
//!
//! so P̄_d becomes 2µ terms of the form 𝓘_{√2,√λ}(µ−l, u, 2µ(h ∓ |H|)/γ̄),
//! each evaluated by [`integrals::closed_form`]. The e^{z} and e^{−z} halves
//! cancel as |H| → 0; the conditioning of the sum is monitored and a
//! [`Error::NumericInstability`] is raised when it would cost more than the
//! [`MAX_ROUNDING_ERROR`] budget.

use rayon::prelude::*;

use crate::error::domain;
use crate::fading::{snr_pdf, EtaMuParams};
use crate::integrals::{self, IntegralParams};
use crate::quad::{integrate, tail_cutoff, QuadOptions};
use crate::specfun::{
    inv_reg_upper_gamma, ln_gamma, marcum_q, reg_upper_gamma, Accumulator,
};
use crate::{Error, Result};

/// Largest accepted rounding-error estimate 8ε·Σ|terms| of the closed-form expansion.
///
/// Observed errors stay below ε·Σ|terms|, so accepted results carry an
/// absolute error of at most about 1e-8.
pub const MAX_ROUNDING_ERROR: f64 = 1e-7;

/// Absolute tolerance used for the quadrature route when it stands in for the closed form.
pub const FALLBACK_ABS_TOL: f64 = 1e-10;

/// Absolute tolerance of the oracle column in [`pd_vs_snr_curve`].
pub const ORACLE_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Time-bandwidth product.
    pub u: f64,
    /// Energy threshold.
    pub lambda: f64,
    /// Average SNR, linear scale.
    pub gamma_bar: f64,
}

impl DetectorConfig {
    pub fn new(u: f64, lambda: f64, gamma_bar: f64) -> Result<Self> {
        let cfg = DetectorConfig { u, lambda, gamma_bar };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Threshold chosen for a target false-alarm probability.
    pub fn for_pf(u: f64, pf: f64, gamma_bar: f64) -> Result<Self> {
        Self::new(u, threshold_for_pf(u, pf)?, gamma_bar)
    }

    pub fn validate(&self) -> Result<()> {
        check_u(self.u)?;
        check_lambda(self.lambda)?;
        if !(self.gamma_bar > 0.0 && self.gamma_bar.is_finite()) {
            return Err(domain!("average SNR must be finite and > 0, got {}", self.gamma_bar));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub pf: f64,
    pub pd: f64,
    pub pm: f64,
}

impl RocPoint {
    pub fn new(pf: f64, pd: f64) -> Self {
        RocPoint { pf, pd, pm: 1.0 - pd }
    }
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(domain!("time-bandwidth product u must be finite and > 0, got {u}"))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(domain!("threshold lambda must be finite and > 0, got {lambda}"))
    }
}

fn check_pf(pf: f64) -> Result<()> {
    if pf > 0.0 && pf < 1.0 {
        Ok(())
    } else {
        Err(domain!("false-alarm probability must lie in (0, 1), got {pf}"))
    }
}

pub fn prob_false_alarm(u: f64, lambda: f64) -> Result<f64> {
    check_u(u)?;
    check_lambda(lambda)?;
    reg_upper_gamma(u, 0.5 * lambda)
}

/// λ = 2 𝒢⁻¹(u, P_f).
pub fn threshold_for_pf(u: f64, pf: f64) -> Result<f64> {
    check_u(u)?;
    check_pf(pf)?;
    Ok(2.0 * inv_reg_upper_gamma(u, pf)?)
}

/// Detection probability at a fixed instantaneous SNR γ.
pub fn prob_detection_awgn(u: f64, gamma: f64, lambda: f64) -> Result<f64> {
    check_u(u)?;
    check_lambda(lambda)?;
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(domain!("SNR must be finite and >= 0, got {gamma}"));
    }
    if gamma == 0.0 {
        // exactly the false-alarm probability, without rounding λ through √λ
        return reg_upper_gamma(u, 0.5 * lambda);
    }
    marcum_q(u, (2.0 * gamma).sqrt(), lambda.sqrt())
}

/// P̄_d by adaptive quadrature of the fading average; valid for any real µ > 0.
pub fn avg_pd_quadrature(cfg: &DetectorConfig, params: &EtaMuParams, abs_tol: f64) -> Result<f64> {
    cfg.validate()?;
    if !(abs_tol > 0.0) {
        return Err(domain!("abs_tol must be positive, got {abs_tol}"));
    }
    let DetectorConfig { u, lambda, gamma_bar } = *cfg;
    let b = lambda.sqrt();
    let pdf = |g: f64| snr_pdf(g, gamma_bar, params);

    // The density decays like e^{−2µ(h−|H|)γ/γ̄}; start the tail search past
    // both its bulk and the Marcum transition.
    let decay = 2.0 * params.mu * (params.h - params.big_h.abs()) / gamma_bar;
    let start = (params.mu / decay).max(gamma_bar).max(0.5 * lambda);
    let upper = tail_cutoff(|g| pdf(g).unwrap_or(f64::INFINITY) * g.max(1.0), start, abs_tol * 1e-3)?;

    // geometric panels from the density's scale outward, so no panel is
    // wide enough for its nodes to step over the mass
    let mut breaks = vec![0.0, upper];
    let mut g = gamma_bar / 64.0;
    while g < upper {
        breaks.push(g);
        g *= 2.0;
    }
    if 0.5 * lambda < upper {
        breaks.push(0.5 * lambda);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |g: f64| -> Result<f64> {
        let density = pdf(g)?;
        if density == 0.0 {
            return Ok(0.0);
        }
        Ok(density * marcum_q(u, (2.0 * g).sqrt(), b)?)
    };
    let r = integrate(integrand, &breaks, &QuadOptions::absolute(abs_tol))?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// Closed-form P̄_d for integer µ.
pub fn avg_pd_eta_mu(cfg: &DetectorConfig, params: &EtaMuParams) -> Result<f64> {
    cfg.validate()?;
    let mu = params.mu;
    if mu.fract() != 0.0 {
        return Err(domain!(
            "the closed-form average requires integer mu; got mu = {mu} (use the quadrature route)"
        ));
    }
    let abs_h = params.big_h.abs();
    if abs_h == 0.0 {
        return Err(Error::NumericInstability(
            "H = 0: the exponential expansion of the density is singular at the symmetric point".into(),
        ));
    }
    let DetectorConfig { u, lambda, gamma_bar } = *cfg;
    let h = params.h;
    let b = lambda.sqrt();
    let q_minus = 2.0 * mu * (h - abs_h) / gamma_bar;
    let q_plus = 2.0 * mu * (h + abs_h) / gamma_bar;
    let sign_mu = if (mu as u64).is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut acc = Accumulator::default();
    let n = mu as u64;
    for l in 0..n {
        let lf = l as f64;
        let coef = term_coefficient(l, mu, h, abs_h, gamma_bar)?;
        let sign_l = if l % 2 == 0 { 1.0 } else { -1.0 };
        for (sign, q) in [(sign_l, q_minus), (sign_mu, q_plus)] {
            let inner = integrals::closed_form(&IntegralParams::new(
                std::f64::consts::SQRT_2,
                b,
                mu - lf,
                u,
                q,
            )?)?;
            acc.add(sign * coef * inner);
        }
    }
    let (value, magnitude) = (acc.value(), acc.abs_sum());
    if !value.is_finite() {
        return Err(Error::Range(format!("closed-form average overflows for {cfg:?}, {params:?}")));
    }
    let rounding = 8.0 * f64::EPSILON * magnitude;
    if rounding > MAX_ROUNDING_ERROR {
        return Err(Error::NumericInstability(format!(
            "closed-form average cancels by a factor {:.1e} (|H| = {abs_h:e}, rounding estimate {rounding:.1e}); use the quadrature route",
            magnitude / value.abs()
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// 2 (µ)_l h^µ (µ/γ̄)^{µ−l} / (l! Γ(µ−l) 4^l |H|^{µ+l}).
///
/// Direct products keep the relative error at a few ulps; the log route is
/// only taken when they overflow.
fn term_coefficient(l: u64, mu: f64, h: f64, abs_h: f64, gamma_bar: f64) -> Result<f64> {
    let n = mu as u64;
    let lf = l as f64;
    let ratio = mu / gamma_bar;
    let mut direct = 2.0 * h.powi(n as i32) * ratio.powi((n - l) as i32) / (4f64.powi(l as i32) * abs_h.powi((n + l) as i32));
    // (µ)_l / (l! Γ(µ−l)) = (µ+l−1)! / ((µ−1)! l! (µ−l−1)!)
    for j in 0..l {
        direct *= (mu + j as f64) / (j + 1) as f64;
    }
    for j in 1..(n - l) {
        direct /= j as f64;
    }
    if direct.is_finite() && direct > 0.0 {
        return Ok(direct);
    }
    let ln = std::f64::consts::LN_2 + ln_gamma(mu + lf)? - ln_gamma(mu)? + mu * h.ln()
        + (mu - lf) * ratio.ln()
        - ln_gamma(lf + 1.0)?
        - ln_gamma(mu - lf)?
        - 2.0 * lf * std::f64::consts::LN_2
        - (mu + lf) * abs_h.ln();
    Ok(ln.exp())
}

/// Closed form where it is usable, otherwise the quadrature route.
pub fn avg_pd(cfg: &DetectorConfig, params: &EtaMuParams) -> Result<f64> {
    match avg_pd_eta_mu(cfg, params) {
        Err(Error::Domain(_)) if params.mu.fract() != 0.0 => {
            avg_pd_quadrature(cfg, params, FALLBACK_ABS_TOL)
        }
        Err(Error::NumericInstability(_)) => avg_pd_quadrature(cfg, params, FALLBACK_ABS_TOL),
        other => other,
    }
}

/// P̄_d at the threshold that yields the target false-alarm probability.
pub fn avg_pd_for_pf(u: f64, pf: f64, gamma_bar: f64, params: &EtaMuParams) -> Result<f64> {
    avg_pd(&DetectorConfig::for_pf(u, pf, gamma_bar)?, params)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub snr_db: f64,
    pub pd_analytic: Result<f64>,
    pub pd_oracle: Result<f64>,
}

impl CurveRow {
    pub fn abs_diff(&self) -> Option<f64> {
        match (&self.pd_analytic, &self.pd_oracle) {
            (Ok(a), Ok(o)) => Some((a - o).abs()),
            _ => None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.pd_analytic.is_ok() && self.pd_oracle.is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn errors(&self) -> impl Iterator<Item = (f64, &Error)> {
        self.rows.iter().flat_map(|r| {
            [&r.pd_analytic, &r.pd_oracle]
                .into_iter()
                .filter_map(move |v| v.as_ref().err().map(|e| (r.snr_db, e)))
        })
    }
}

/// P̄_d against average SNR in dB, with the quadrature oracle alongside.
///
/// Rows are evaluated in parallel but returned in grid order; a failing row
/// records its error and does not affect the others.
pub fn pd_vs_snr_curve(u: f64, pf: f64, params: &EtaMuParams, snr_db_grid: &[f64]) -> Result<CurveTable> {
    check_u(u)?;
    let lambda = threshold_for_pf(u, pf)?;
    let rows = snr_db_grid
        .par_iter()
        .map(|&snr_db| {
            let cfg = DetectorConfig::new(u, lambda, db_to_linear(snr_db));
            let (pd_analytic, pd_oracle) = match cfg {
                Ok(cfg) => (
                    avg_pd(&cfg, params),
                    avg_pd_quadrature(&cfg, params, ORACLE_ABS_TOL),
                ),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            CurveRow { snr_db, pd_analytic, pd_oracle }
        })
        .collect();
    Ok(CurveTable { rows })
}

/// Complementary ROC points (P_f, P̄_d, P̄_m) at a fixed average SNR in dB.
pub fn roc_curve(u: f64, snr_db: f64, params: &EtaMuParams, pf_grid: &[f64]) -> Vec<Result<RocPoint>> {
    let gamma_bar = db_to_linear(snr_db);
    pf_grid
        .par_iter()
        .map(|&pf| avg_pd_for_pf(u, pf, gamma_bar, params).map(|pd| RocPoint::new(pf, pd)))
        .collect()
}
