//! Special-function kernels.
//!
//! Every formula elsewhere in the crate is composed from these. All routines
//! are pure functions of `f64` arguments and return [`crate::Result`]; the
//! series-based ones accept a [`SeriesControl`] through their `_with`
//! variants.
//!
//! | Function | Accuracy contract |
//! |----------|-------------------|
//! | [`ln_gamma`] | relative 1e-14 on [1e-3, 1e3] |
//! | [`reg_upper_gamma`] | relative 1e-12 for a ≤ 500, x ≤ 1e4 |
//! | [`inv_reg_upper_gamma`] | round-trip residual ≤ 1e-12 |
//! | [`bessel_i`] | relative 1e-11 for z ≤ 50 |
//! | [`marcum_q`] | certified truncation below `rel_tol` |

mod bessel;
mod gamma;
mod hyper;
mod marcum;

pub use bessel::{bessel_i, bessel_i_with, ln_bessel_i};
pub use gamma::{
    inv_reg_upper_gamma, ln_gamma, ln_poisson_term, reg_gamma_pair, reg_lower_gamma,
    reg_upper_gamma,
};
pub use hyper::{hypergeometric_1f0, kummer_1f1, kummer_1f1_with, pochhammer};
pub use marcum::{marcum_q, marcum_q_with};

use crate::error::domain;
use crate::Result;

/// Stopping rule shared by all series summations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-13,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(domain!("rel_tol must be positive and finite, got {rel_tol}"));
        }
        if max_terms == 0 {
            return Err(domain!("max_terms must be at least 1"));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

/// Running sum with Neumaier compensation and a magnitude tracker.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl Accumulator {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of the magnitudes of all addends; its ratio to |value| measures cancellation.
    pub(crate) fn abs_sum(&self) -> f64 {
        self.abs_sum
    }
}
