//! Validates and runs a small experiment config the way the `zne-harness` binary does.
//!
//! ```bash
//! cargo run --release --example harness
//! ```

use colored_zne::harness::{run, validate, ExperimentConfig};

const CONFIG: &str = r#"
kind = "zne_single"
seed = 5
out_dir = "target/example-harness"

[circuit]
family = "rb"
n_qubits = 1
clifford_depth = 10

[noise]
presets = ["white", "brown"]

[run]
trajectories = 1000
"#;

fn main() -> colored_zne::Result<()> {
    let bad = CONFIG.replace("[run]", "[scaling]\nmethods = [\"global_fold\"]\nlambdas = [1, 2, 3]\n\n[run]");
    print!("rejected config:\n{}", validate(&bad));

    let cfg = ExperimentConfig::parse(CONFIG).expect("config is valid");
    let summary = run(&cfg)?;
    for a in &summary.manifest.artifacts {
        println!("{}  {}", &a.sha256[..12], summary.out_dir.join(&a.file).display());
    }
    print!("{}", std::fs::read_to_string(summary.out_dir.join("zne_fits.csv"))?);
    Ok(())
}
