//! Oracles shared by the integration tests and the acceptance runner.
//!
//! Everything here is written against the defining integrals or the literal
//! textbook forms, independently of the crate's evaluation routes.
#![allow(dead_code)]

pub mod calibration;

use marcumq::fading::{snr_pdf, EtaMuParams};
use marcumq::specfun::{bessel_i, ln_gamma};

/// Tanh-sinh quadrature on [a, b] with step 2^-7 in the transformed variable.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 1.0 / 128.0;
    let hp = std::f64::consts::FRAC_PI_2;
    let mut sum = 0.0;
    let mut k = 0i64;
    loop {
        let t = k as f64 * h;
        let s = hp * t.sinh();
        let c = s.cosh();
        let w = hp * t.cosh() / (c * c);
        if w < 1e-300 || k > 1000 {
            break;
        }
        // distance to the endpoints, computed without cancellation
        let d = half / (s.exp() * c);
        let mut contrib = 0.0;
        for x in [b - d, a + d] {
            if x > a && x < b {
                contrib += f(x);
            }
        }
        if k == 0 {
            contrib = f(mid);
        }
        sum += w * contrib;
        k += 1;
    }
    sum * h * half
}

/// Tanh-sinh over consecutive panels.
pub fn panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64]) -> f64 {
    breaks.windows(2).map(|w| tanh_sinh(&f, w[0], w[1])).sum()
}

/// Geometric panel breaks from 0 up to `upper`, refined around `scale`.
pub fn geometric_breaks(scale: f64, upper: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    let mut x = scale / 64.0;
    while x < upper {
        b.push(x);
        x *= 2.0;
    }
    b.push(upper);
    b
}

/// Marcum Q from its defining integral ∫_b^∞ x (x/a)^{m−1} e^{−(x²+a²)/2} I_{m−1}(ax) dx.
pub fn marcum_q_by_integral(m: f64, a: f64, b: f64) -> f64 {
    let f = |x: f64| {
        let ln = x.ln() + (m - 1.0) * (x / a).ln() - 0.5 * (x * x + a * a) + a * x;
        // e^{−ax} I_{m−1}(ax) keeps the Bessel factor bounded
        ln.exp() * bessel_i(m - 1.0, a * x).unwrap() * (-a * x).exp()
    };
    let upper = a + b + 40.0;
    let mut breaks = vec![b];
    for x in [a, a + 5.0, a + 10.0] {
        if x > b {
            breaks.push(x);
        }
    }
    breaks.push(upper);
    breaks.sort_by(f64::total_cmp);
    panels(f, &breaks)
}

/// 𝒢(a, x) from ∫_x^∞ t^{a−1} e^{−t} dt / Γ(a).
pub fn upper_gamma_by_integral(a: f64, x: f64) -> f64 {
    let lg = ln_gamma(a).unwrap();
    let f = |t: f64| ((a - 1.0) * t.ln() - t - lg).exp();
    let upper = x + a + 60.0 + 10.0 * a.sqrt();
    let mut breaks = vec![x];
    let mode = (a - 1.0).max(0.0);
    if mode > x {
        breaks.push(mode);
    }
    breaks.push(upper);
    panels(f, &breaks)
}

/// ∫₀^∞ x^{2k−1} Q_m(ax, b) e^{−px²} dx by tanh-sinh, using the crate's Marcum Q.
pub fn integral_by_tanh_sinh(a: f64, b: f64, k: f64, m: f64, p: f64) -> f64 {
    let f = |x: f64| {
        ((2.0 * k - 1.0) * x.ln() - p * x * x).exp() * marcum_q_checked(m, a * x, b)
    };
    let scale = ((2.0 * k - 1.0).max(1.0) / (2.0 * p)).sqrt();
    panels(f, &geometric_breaks(scale, scale * 4.0 + (80.0 / p).sqrt()))
}

/// The same integral in the t = x² parameterization, ½∫ t^{k−1} Q_m(a√t, b) e^{−pt} dt.
pub fn integral_second_form(a: f64, b: f64, k: f64, m: f64, p: f64) -> f64 {
    let f = |t: f64| 0.5 * ((k - 1.0) * t.ln() - p * t).exp() * marcum_q_checked(m, a * t.sqrt(), b);
    let scale = k.max(1.0) / p;
    panels(f, &geometric_breaks(scale, scale * 4.0 + 80.0 / p))
}

fn marcum_q_checked(m: f64, a: f64, b: f64) -> f64 {
    marcumq::specfun::marcum_q(m, a, b).unwrap()
}

/// Upper end of the η–µ density's effective support.
pub fn density_upper(gamma_bar: f64, p: &EtaMuParams) -> f64 {
    let decay = 2.0 * p.mu * (p.h - p.big_h.abs()) / gamma_bar;
    (60.0 + 6.0 * p.mu) / decay
}

/// ∫₀^∞ γ^j p(γ) dγ by tanh-sinh.
pub fn density_moment(j: i32, gamma_bar: f64, p: &EtaMuParams) -> f64 {
    let f = |g: f64| g.powi(j) * snr_pdf(g, gamma_bar, p).unwrap();
    panels(f, &geometric_breaks(gamma_bar, density_upper(gamma_bar, p)))
}

/// ∫₀^∞ Q_u(√(2γ), √λ) p(γ) dγ by tanh-sinh.
pub fn avg_pd_by_tanh_sinh(u: f64, lambda: f64, gamma_bar: f64, p: &EtaMuParams) -> f64 {
    let f = |g: f64| snr_pdf(g, gamma_bar, p).unwrap() * marcum_q_checked(u, (2.0 * g).sqrt(), lambda.sqrt());
    let mut breaks = geometric_breaks(gamma_bar, density_upper(gamma_bar, p));
    breaks.push(0.5 * lambda);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    panels(f, &breaks)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
