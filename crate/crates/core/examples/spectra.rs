//! ARMA noise presets: analytic spectra, Welch estimates and pulse-stretched spectra.
//!
//! ```bash
//! cargo run --release --example spectra
//! ```

use colored_zne::arma::{periodogram, preset, stretch_model, NoiseGenerator, Preset, DEFAULT_TAPS};
use colored_zne::rng::StreamId;
use std::f64::consts::PI;

fn main() -> colored_zne::Result<()> {
    let power = 1e-4;
    let probes = [0.01 * PI, 0.1 * PI, 0.5 * PI, 0.9 * PI];
    println!("{:<8} {:>8} {:>12} {:>12}", "preset", "omega/pi", "analytic", "welch");
    for (k, p) in Preset::ALL.into_iter().enumerate() {
        let model = preset(p, power)?;
        let mut samples = vec![0.0; 1 << 20];
        NoiseGenerator::new(&model, StreamId::new(1, k as u64, 0, 0)).fill(&mut samples);
        let est = periodogram(&samples, 4096)?;
        for &w in &probes {
            use colored_zne::arma::SpectralDensity;
            println!("{:<8} {:>8.2} {:>12.4e} {:>12.4e}", p.name(), w / PI, model.spectrum(w), est.density(w));
        }
    }

    println!("\npulse stretching replaces S(w) by lambda S(w/lambda):");
    let pink = preset(Preset::Pink, power)?;
    for lambda in [3.0, 9.0] {
        let stretched = stretch_model(&pink, lambda, DEFAULT_TAPS)?;
        for &w in &probes[..2] {
            println!(
                "lambda {lambda}  omega/pi {:.2}  target {:.4e}  realised {:.4e}",
                w / PI,
                lambda * pink.spectrum(w / lambda),
                stretched.spectrum(w)
            );
        }
    }
    Ok(())
}
