//! Monte-Carlo free induction decay against the Gaussian-dephasing oracle.
//!
//! ```bash
//! cargo run --release --example free_induction
//! ```

use colored_zne::arma::{preset, Preset};
use colored_zne::monte_carlo::{gaussian_dephasing_oracle, run_noisy, RunConfig};
use colored_zne::zoo::{free_induction, Readout};

fn main() -> colored_zne::Result<()> {
    let cfg = RunConfig::new(3000, 11);
    println!("{:<8} {:>4} {:>10} {:>10} {:>9}", "preset", "K", "mc", "oracle", "z-score");
    for p in Preset::ALL {
        let model = preset(p, 1e-3)?;
        for k in [10, 50] {
            let circuit = free_induction(k, Readout::SigmaX)?;
            let est = run_noisy(&circuit, &model, &Readout::SigmaX.observable(), &cfg)?;
            let oracle = gaussian_dephasing_oracle(&model, k);
            println!(
                "{:<8} {k:>4} {:>10.5} {oracle:>10.5} {:>9.2}",
                p.name(),
                est.mean,
                (est.mean - oracle) / est.stderr.max(1e-12)
            );
        }
    }
    Ok(())
}
