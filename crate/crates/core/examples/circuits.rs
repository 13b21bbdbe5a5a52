//! Generates members of each benchmark family and prints gate statistics.
//!
//! ```bash
//! cargo run --release --example circuits
//! ```

use colored_zne::zoo::{CircuitSpec, Family, Readout};

fn stats(family: Family, count: usize) -> colored_zne::Result<()> {
    let (mut single, mut two, mut depth) = (0usize, 0usize, 0usize);
    for spec in CircuitSpec::batch(family.clone(), 0, count) {
        let inst = spec.build()?;
        let (a, b) = inst.circuit.gate_counts();
        single += a;
        two += b;
        depth += inst.circuit.depth();
        assert!((inst.noiseless_value()? - 1.0).abs() < 1e-9);
    }
    let n = count as f64;
    println!(
        "{:<16} mean single-qubit {:>5.1}   two-qubit {:>4.1}   depth {:>5.1}",
        family.name(),
        single as f64 / n,
        two as f64 / n,
        depth as f64 / n
    );
    Ok(())
}

fn main() -> colored_zne::Result<()> {
    stats(Family::Rb { n_qubits: 1, clifford_depth: 10 }, 50)?;
    stats(Family::Rb { n_qubits: 2, clifford_depth: 2 }, 50)?;
    stats(Family::Mirror { n_qubits: 2, depth: 4 }, 50)?;
    stats(Family::Qaoa { betas: None, gammas: None }, 50)?;
    stats(Family::Cpmg { delay_slots: 2, n_pulses: 2, readout: Readout::SigmaX }, 1)?;

    let spec = CircuitSpec::new(Family::Rb { n_qubits: 2, clifford_depth: 2 }, 7);
    println!("\nrb seed 7:\n{}", spec.build()?.circuit.to_text());
    Ok(())
}
