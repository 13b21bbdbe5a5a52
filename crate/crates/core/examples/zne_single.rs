//! Zero-noise extrapolation of one single-qubit RB circuit under 1/f noise.
//!
//! ```bash
//! cargo run --release --example zne_single
//! ```

use colored_zne::arma::{preset, Preset};
use colored_zne::monte_carlo::{expectation_curves, RunConfig};
use colored_zne::scaling::ScalingKind;
use colored_zne::zne::{default_asymptote, extrapolate_curve};
use colored_zne::zoo::{CircuitSpec, Family};

fn main() -> colored_zne::Result<()> {
    let spec = CircuitSpec::new(Family::Rb { n_qubits: 1, clifford_depth: 10 }, 4);
    let model = preset(Preset::Pink, 1e-4)?;
    let cfg = RunConfig::new(3000, 4);
    let curves = expectation_curves(&spec, &ScalingKind::ALL, &model, "pink", &cfg)?;
    for curve in &curves {
        let est = extrapolate_curve(curve, default_asymptote(curve)?)?;
        let means: Vec<String> = curve.means().iter().map(|m| format!("{m:.4}")).collect();
        println!("{:<14} E(lambda) = [{}]  ->  E(0) = {:.4}", curve.method, means.join(", "), est.value_at_zero);
    }
    Ok(())
}
