//! Complementary ROC at 15 dB and the missed-detection ratios between fading conditions.

use marcumq::detection::{avg_pd_for_pf, db_to_linear, roc_curve};
use marcumq::fading::{derive_params, FadingFormat};

fn main() -> marcumq::Result<()> {
    let pf_grid: Vec<f64> = (0..10).map(|i| 0.01 * 20f64.powf(i as f64 / 9.0)).collect();
    let cases = [(0.01, 1.0), (0.95, 1.0), (0.95, 2.0)];
    print!("{:>8}", "pf");
    for (eta, mu) in cases {
        print!("  Pm(eta={eta}, mu={mu})");
    }
    println!();
    let curves: Vec<_> = cases
        .iter()
        .map(|&(eta, mu)| Ok(roc_curve(4.0, 15.0, &derive_params(FadingFormat::Format1, eta, mu)?, &pf_grid)))
        .collect::<marcumq::Result<_>>()?;
    for (i, pf) in pf_grid.iter().enumerate() {
        print!("{pf:>8.4}");
        for c in &curves {
            print!("  {:>20.6}", c[i].as_ref().map_or(f64::NAN, |p| p.pm));
        }
        println!();
    }

    let pm = |eta, mu| -> marcumq::Result<f64> {
        Ok(1.0 - avg_pd_for_pf(4.0, 0.1, db_to_linear(15.0), &derive_params(FadingFormat::Format1, eta, mu)?)?)
    };
    println!("\nat Pf = 0.1:");
    println!("  Pm(eta=0.95) / Pm(eta=0.01) = {:.4}", pm(0.95, 1.0)? / pm(0.01, 1.0)?);
    println!("  Pm(mu=2) / Pm(mu=1)         = {:.4}", pm(0.95, 2.0)? / pm(0.95, 1.0)?);
    Ok(())
}
