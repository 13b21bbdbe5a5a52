//! Filter functions: scaled responses, closed-form folds and weak-noise predictions.
//!
//! ```bash
//! cargo run --release --example filter_response
//! ```

use colored_zne::arma::{preset, Preset};
use colored_zne::filter::{
    analytic_global_fold_ff, filter_function, fourier_switching, global_fold_components, normalized_max_ff,
    nyquist_grid, predict_dephased, second_cumulant, switching_functions, uniform_grid,
};
use colored_zne::monte_carlo::{run_noisy, RunConfig};
use colored_zne::quantum::PauliBasis;
use colored_zne::scaling::{fold_global, ScalingKind};
use colored_zne::zoo::{cpmg_circuit, prepared_cpmg, Readout};
use std::f64::consts::PI;

fn main() -> colored_zne::Result<()> {
    let cpmg = cpmg_circuit(2, 2)?;
    let half = uniform_grid(0.0, PI, 1024);
    println!("normalized CPMG response: peak and centroid (rad per slot)");
    for kind in ScalingKind::ALL {
        for c in normalized_max_ff(&cpmg, kind, &[1.0, 3.0, 5.0], &half)? {
            println!("{:<14} lambda {}  peak {:.3}  centroid {:.3}", kind, c.lambda, c.peak(), c.centroid());
        }
    }

    let grid = nyquist_grid(2048);
    let basis = PauliBasis::new(1)?;
    let z = basis.z_index(0);
    let (f1, f2) = global_fold_components(&cpmg, &basis, &grid)?;
    let analytic = analytic_global_fold_ff(&f1, &f2, 2, cpmg.depth() as f64)?;
    let numeric = fourier_switching(&switching_functions(&fold_global(&cpmg, 2), &basis)?, &grid)?;
    let a = filter_function(&analytic, (z, z), (z, z))?;
    let n = filter_function(&numeric, (z, z), (z, z))?;
    let gap = a.iter().zip(&n).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("\nglobal fold M=2, closed form vs folded circuit: max |diff| {gap:.2e}");

    let model = preset(Preset::Pink, 1e-3)?;
    let circuit = prepared_cpmg(4, 4)?;
    let cfg = RunConfig::new(10_000, 2);
    let cum = second_cumulant(&circuit, &[&model], &Readout::SigmaX.observable(), &grid)?;
    let mc = run_noisy(&circuit, &model, &Readout::SigmaX.observable(), &cfg)?;
    println!("sigma_x: cumulant {:.5}  monte carlo {:.5} +- {:.5}", cum.prediction, mc.mean, mc.stderr);
    let proj = predict_dephased(&circuit, &[&model], &Readout::Plus.observable(), &grid)?;
    let mc = run_noisy(&circuit, &model, &Readout::Plus.observable(), &cfg)?;
    println!("|+><+|:  chi {:.4}  predicted {:.5}  monte carlo {:.5} +- {:.5}", proj.chi, proj.value, mc.mean, mc.stderr);
    Ok(())
}
