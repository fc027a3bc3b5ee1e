//! Shows how the certified truncation bound tracks the true remainder.

use marcumq::integrals::{loose_truncation_bound, partial_sum, series, truncation_bound, IntegralParams};

fn main() -> marcumq::Result<()> {
    let q = IntegralParams::new(1.3, 0.9, 1.7, 2.1, 0.5)?;
    let full = series(&q, 1e-15)?.value;
    println!("{:>3}  {:>12}  {:>12}  {:>12}", "n", "remainder", "bound", "subtracted");
    for n in [0, 1, 2, 5, 10, 20, 40] {
        println!(
            "{n:>3}  {:>12.3e}  {:>12.3e}  {:>12.3e}",
            full - partial_sum(&q, n)?,
            truncation_bound(&q, n)?,
            loose_truncation_bound(&q, n)?,
        );
    }
    // the subtracted form stalls at S - I, the tail-weight form keeps shrinking
    println!("S - I = {:.3e}", q.gaussian_moment() - full);
    Ok(())
}
