//! Marcum-Q weighted integrals and energy-detection performance over η–µ fading.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specfun`] | log-gamma, incomplete gamma and its inverse, Bessel I, ₁F₁, Marcum Q |
//! | [`quad`] | adaptive Gauss–Kronrod quadrature used by every numerical oracle |
//! | [`integrals`] | three evaluators of ∫₀^∞ x^{2k−1} Q_m(ax, b) e^{−px²} dx and its truncation bounds |
//! | [`fading`] | η–µ parameter maps, SNR density, µ from envelope moments |
//! | [`detection`] | false alarm, detection, averaged detection, threshold inversion, curves |
//! | [`conventions`] | normalisations and conventions settled by numerical calibration |
//! | [`cli`] | the `marcumq` command line |
//!
//! ```
//! use marcumq::integrals::{closed_form, series, IntegralParams};
//!
//! let params = IntegralParams::new(1.2, 0.8, 3.0, 2.5, 0.7).unwrap();
//! let exact = closed_form(&params).unwrap();
//! let approx = series(&params, 1e-12).unwrap();
//! assert!((exact - approx.value).abs() <= approx.error_bound + 1e-14);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod conventions;
pub mod detection;
mod error;
pub mod fading;
pub mod integrals;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
