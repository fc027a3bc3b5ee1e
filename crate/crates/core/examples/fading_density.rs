//! Tabulates the eta-mu SNR density and recovers mu from its moments.

use marcumq::fading::{derive_params, mu_from_moments, snr_pdf, FadingFormat};
use marcumq::quad::{integrate, QuadOptions};

fn main() -> marcumq::Result<()> {
    let gamma_bar = 1.0;
    let shapes = [(0.05, 1.0), (0.3, 1.0), (0.95, 1.0), (0.95, 3.0)];
    print!("{:>6}", "gamma");
    for (eta, mu) in shapes {
        print!("  eta={eta:<4} mu={mu:<2}");
    }
    println!();
    for i in 0..=12 {
        let g = 0.25 * i as f64;
        print!("{g:>6.2}");
        for (eta, mu) in shapes {
            let p = derive_params(FadingFormat::Format1, eta, mu)?;
            print!("  {:>16.6}", snr_pdf(g, gamma_bar, &p)?);
        }
        println!();
    }

    let p = derive_params(FadingFormat::Format1, 0.3, 1.5)?;
    let moment = |j: i32| {
        integrate(
            |g| Ok(g.powi(j) * snr_pdf(g, gamma_bar, &p)?),
            &[0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0],
            &QuadOptions::absolute(1e-13),
        )
        .map(|r| r.value)
    };
    let (m1, m2) = (moment(1)?, moment(2)?);
    println!("mu = 1.5 recovered from moments: {:.9}", mu_from_moments(m1, m2 - m1 * m1, &p)?);
    Ok(())
}
