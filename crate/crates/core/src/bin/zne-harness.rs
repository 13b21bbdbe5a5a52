use clap::{Parser, Subcommand};
use colored_zne::harness::{run_path, validate_path};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "zne-harness", version, about = "Run noise-scaling experiments from a config file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the output directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its artifacts
    Run { config: PathBuf },
    /// Check a config without running it
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => {
            let report = validate_path(&config);
            if report.is_ok() {
                ExitCode::SUCCESS
            } else {
                eprint!("{}: {report}", config.display());
                ExitCode::from(2)
            }
        }
        Command::Run { config } => {
            let report = validate_path(&config);
            if !report.is_ok() {
                eprint!("{}: {report}", config.display());
                return ExitCode::from(2);
            }
            match run_path(&config, cli.seed, cli.out_dir.as_deref(), cli.threads) {
                Ok(summary) => {
                    for a in &summary.manifest.artifacts {
                        println!("{}", summary.out_dir.join(&a.file).display());
                    }
                    println!("{}", summary.out_dir.join("manifest.json").display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
