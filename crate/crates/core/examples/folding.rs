//! Digital noise scaling: global folding, local folding and gate Trotterization.
//!
//! ```bash
//! cargo run --release --example folding
//! ```

use colored_zne::quantum::{phase_distance, unitary_of, Gate};
use colored_zne::scaling::{fold_global, fold_local, gate_root, trotterize};
use colored_zne::zoo::{cpmg_circuit, rb_circuit};

fn main() -> colored_zne::Result<()> {
    let base = rb_circuit(2, 2, 3)?;
    let u = unitary_of(&base)?;
    println!("base depth {}", base.depth());
    for lambda in [3usize, 5, 9] {
        let n = (lambda - 1) / 2;
        let global = fold_global(&base, n);
        let local = fold_local(&base, n);
        let trotter = trotterize(&base, lambda)?;
        println!(
            "lambda {lambda}: depths {} / {} / {}   distances {:.1e} / {:.1e} / {:.1e}",
            global.depth(),
            local.depth(),
            trotter.depth(),
            phase_distance(&u, &unitary_of(&global)?),
            phase_distance(&u, &unitary_of(&local)?),
            phase_distance(&u, &unitary_of(&trotter)?)
        );
    }

    let root = gate_root(&Gate::x(0), 3)?;
    println!("\nX^(1/3) =\n{}", root.matrix());

    println!("CPMG folded once, globally:\n{}", fold_global(&cpmg_circuit(1, 2)?, 1).to_text());
    Ok(())
}
