//! Conventions adopted where the usual printed forms of these results are
//! ambiguous or off by a constant.
//!
//! Each entry names the quantity, the form the crate implements, the form it
//! rejects, and the numerical check that decides between them. The
//! calibration test recomputes every check and fails if its outcome is not
//! listed here.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    /// Stable identifier used by the calibration test.
    pub id: &'static str,
    pub quantity: &'static str,
    pub adopted: &'static str,
    pub rejected: &'static str,
    pub evidence: &'static str,
}

pub const CONVENTIONS: &[Convention] = &[
    Convention {
        id: "series-leading-constant",
        quantity: "global constant of the negative-binomial series for the integral",
        adopted: "2^(k-1)",
        rejected: "2^k",
        evidence: "b = 0 reduces the integral to the Gaussian moment Gamma(k)/(2p^k); the 2^k form is twice the quadrature value on every grid point",
    },
    Convention {
        id: "factorial",
        quantity: "m! in the denominator of the finite closed form",
        adopted: "Gamma(m+1)",
        rejected: "Gamma(m-1)",
        evidence: "only Gamma(m+1) reproduces the quadrature value; Gamma(m-1) is also undefined for m <= 1",
    },
    Convention {
        id: "moment-ratio-exponent",
        quantity: "H/h factor in the moment-based estimate of mu",
        adopted: "[1 + (H/h)^2]",
        rejected: "[1 + H/h]",
        evidence: "moments integrated from the density recover mu only with the squared ratio",
    },
    Convention {
        id: "truncation-total",
        quantity: "series total used by the truncation bound",
        adopted: "Gamma(k)/(2p^k)",
        rejected: "Gamma(k)/p^k",
        evidence: "follows from the series constant; the larger total is a valid but doubled bound",
    },
    Convention {
        id: "truncation-form",
        quantity: "shape of the truncation bound",
        adopted: "tail weight S * sum_{l>n} w_l",
        rejected: "S - partial sum with incomplete-gamma weights",
        evidence: "the subtracted form tends to S - I > 0 when b > 0 and never certifies convergence; both coincide when b = 0",
    },
    Convention {
        id: "inner-integral-exponent",
        quantity: "power of (a^2 + 2p) in the series terms",
        adopted: "(a^2 + 2p)^(k+l)",
        rejected: "(a^2 + 2p) without exponent",
        evidence: "only the exponent k + l gives weights that sum to one",
    },
    Convention {
        id: "detection-power-of-two",
        quantity: "power of two in the double sum of the closed-form average detection probability",
        adopted: "2^(mu+u+l-i)",
        rejected: "2^(mu+u)",
        evidence: "term-by-term composition from the finite closed form; agrees with the averaging quadrature, the 2^(mu+u) form only for mu = 1",
    },
    Convention {
        id: "bessel-large-argument",
        quantity: "ln I_nu(z) beyond z = 700",
        adopted: "Hankel asymptotic expansion in log space",
        rejected: "range error",
        evidence: "eta = 0.01 drives the density's Bessel argument past 2000 at 20 dB; bessel_i itself still refuses z > 700",
    },
];

pub fn lookup(id: &str) -> Option<&'static Convention> {
    CONVENTIONS.iter().find(|c| c.id == id)
}
