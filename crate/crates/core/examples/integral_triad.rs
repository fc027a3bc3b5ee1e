//! Evaluates one integral by the closed form, the certified series and quadrature.
//!
//!     cargo run --example integral_triad -- 1.2 0.8 3 2.5 0.7

use marcumq::integrals::{closed_form, quadrature_oracle, series, IntegralParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let [a, b, k, m, p] = match v.as_slice() {
        [a, b, k, m, p] => [*a, *b, *k, *m, *p],
        [] => [1.2, 0.8, 3.0, 2.5, 0.7],
        _ => return Err("expected five values: a b k m p".into()),
    };
    let q = IntegralParams::new(a, b, k, m, p)?;

    match closed_form(&q) {
        Ok(v) => println!("closed      {v:.15}"),
        Err(e) => println!("closed      unavailable: {e}"),
    }
    let s = series(&q, 1e-12)?;
    println!("series      {:.15}  (bound {:.1e}, {} terms)", s.value, s.error_bound, s.terms_used);
    println!("quadrature  {:.15}", quadrature_oracle(&q, 1e-13)?);
    Ok(())
}
