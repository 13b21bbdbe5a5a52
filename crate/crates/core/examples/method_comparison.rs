//! Relative noise-scaling error of each method against ideal spectrum scaling.
//!
//! A reduced version of the full experiment: 10 two-qubit RB circuits.
//!
//! ```bash
//! cargo run --release --example method_comparison
//! ```

use colored_zne::arma::{preset, Preset};
use colored_zne::monte_carlo::RunConfig;
use colored_zne::scaling::ScalingKind;
use colored_zne::zne::method_comparison;
use colored_zne::zoo::{CircuitSpec, Family};

fn main() -> colored_zne::Result<()> {
    let specs = CircuitSpec::batch(Family::Rb { n_qubits: 2, clifford_depth: 2 }, 0, 10);
    let spectra = vec![
        ("white".to_string(), preset(Preset::White, 1e-4)?),
        ("pink".to_string(), preset(Preset::Pink, 1e-4)?),
    ];
    let cfg = RunConfig::new(3000, 0).with_lambdas(&[1.0, 5.0, 9.0]);
    let table = method_comparison(&specs, &ScalingKind::DIGITAL, &spectra, &cfg)?;
    println!("{:<7} {:<14} {:>6} {:>10} {:>10}", "noise", "method", "lambda", "mean", "band");
    for r in &table.rows {
        println!("{:<7} {:<14} {:>6} {:>10.5} {:>10.5}", r.spectrum, r.method, r.lambda, r.mean_delta, r.shot_band);
    }
    Ok(())
}
