//! Batch experiment driver: configs in, CSV/SVG/JSON artifacts out.
//!
//! Every artifact except the SVG plots is a pure function of the config, so a
//! rerun with the same seed rewrites identical bytes for any thread count.

mod config;
pub mod svg;

pub use config::{
    validate, validate_path, ExperimentConfig, ExperimentKind, ValidationReport, DEFAULT_CIRCUITS, DEFAULT_OUT_DIR,
    DEFAULT_POINTS, DEFAULT_POWER,
};

use crate::arma::{periodogram, preset, ArmaModel, NoiseGenerator, Preset};
use crate::error::{Error, Result};
use crate::filter::{normalized_max_ff, uniform_grid};
use crate::monte_carlo::{expectation_curves, RunConfig};
use crate::rng::StreamId;
use crate::scaling::ScalingKind;
use crate::zne::{default_asymptote, fit_exponential, method_comparison};
use crate::zoo::CircuitSpec;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use svg::{Plot, Series};

/// Samples drawn per preset for the spectral estimate.
pub const SPECTRUM_SAMPLES: usize = 1 << 20;

/// One file written by a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub config_sha256: String,
    pub package: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub artifacts: Vec<Artifact>,
}

/// Where the artifacts went.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

struct Writer {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), artifacts: Vec::new() })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), content)?;
        self.artifacts.push(Artifact { file: name.to_string(), sha256: sha256_hex(content.as_bytes()), bytes: content.len() });
        Ok(())
    }
}

/// Parses, validates and runs a config file.
pub fn run_path(path: &Path, seed: Option<u64>, out_dir: Option<&Path>, threads: Option<usize>) -> Result<RunSummary> {
    let mut cfg = ExperimentConfig::from_path(path).map_err(|errors| errors.into_iter().next().expect("at least one error"))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = out_dir {
        cfg.out_dir = d.to_path_buf();
    }
    run_with_threads(&cfg, threads)
}

/// Runs on a dedicated pool of `threads` workers, or the global pool.
pub fn run_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<RunSummary> {
    match threads {
        None => run(cfg),
        Some(0) => Err(Error::InvalidArgument("thread count must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| run(cfg)),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut w = Writer::new(&cfg.out_dir)?;
    match cfg.kind {
        ExperimentKind::Spectra => spectra(cfg, &mut w)?,
        ExperimentKind::ZneSingle => zne_single(cfg, &mut w)?,
        ExperimentKind::MethodComparison => comparison(cfg, &mut w)?,
        ExperimentKind::FilterResponse => filter_response(cfg, &mut w)?,
    }
    let config_json = serde_json::to_string(cfg).expect("config serialises");
    let manifest = Manifest {
        kind: cfg.kind,
        seed: cfg.seed,
        config_sha256: sha256_hex(config_json.as_bytes()),
        package: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        artifacts: w.artifacts.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    std::fs::write(w.dir.join("manifest.json"), text)?;
    Ok(RunSummary { out_dir: w.dir, manifest })
}

fn models(cfg: &ExperimentConfig) -> Result<Vec<(String, ArmaModel)>> {
    cfg.presets.iter().map(|&p| Ok((p.name().to_string(), preset(p, cfg.power)?))).collect()
}

fn run_config(cfg: &ExperimentConfig) -> RunConfig {
    RunConfig::new(cfg.trajectories, cfg.seed).with_lambdas(&cfg.lambdas)
}

fn preset_key(p: Preset) -> u64 {
    Preset::ALL.iter().position(|&q| q == p).expect("listed preset") as u64
}

fn spectra(cfg: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let n_fft = 2 * (cfg.points - 1);
    let omegas = uniform_grid(0.0, PI, cfg.points);
    let mut csv = String::from("preset,omega (rad per slot),analytic (rad^2 per rad/slot),estimated (rad^2 per rad/slot)\n");
    let mut plot = Plot::new(format!("Noise spectra, power {:e}", cfg.power), "omega (rad per slot)", "S(omega)").log_y();
    for &p in &cfg.presets {
        let model = preset(p, cfg.power)?;
        let mut gen = NoiseGenerator::new(&model, StreamId::new(cfg.seed, preset_key(p), 0, 0));
        let mut samples = vec![0.0; SPECTRUM_SAMPLES.max(n_fft)];
        gen.fill(&mut samples);
        let est = periodogram(&samples, n_fft)?;
        let mut line = Vec::with_capacity(omegas.len());
        for (k, &om) in omegas.iter().enumerate() {
            let s = model.spectrum(om);
            let _ = writeln!(csv, "{},{},{},{}", p.name(), om, s, est.values()[k]);
            line.push((om, s));
        }
        plot.push(Series::line(p.name(), line));
    }
    w.write("spectra.csv", &csv)?;
    w.write("spectra.svg", &plot.render())
}

fn zne_single(cfg: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let spec = CircuitSpec::new(cfg.family.clone(), cfg.seed);
    let noiseless = spec.build()?.noiseless_value()?;
    let rc = run_config(cfg);
    let mut curves_csv = String::from("preset,method,lambda (scale factor),mean (expectation),stderr (expectation)\n");
    let mut fits_csv = String::from(
        "preset,method,a (expectation),b (expectation),c (per unit lambda),residual_rms (expectation),converged,zne (expectation),noiseless (expectation)\n",
    );
    for (label, model) in models(cfg)? {
        let curves = expectation_curves(&spec, &cfg.methods, &model, &label, &rc)?;
        let top = cfg.lambdas.last().copied().unwrap_or(1.0);
        let mut plot = Plot::new(format!("ZNE, {} circuit, {label} noise", spec.family.name()), "lambda (scale factor)", "expectation");
        for curve in &curves {
            for p in &curve.points {
                let _ = writeln!(curves_csv, "{label},{},{},{},{}", curve.method, p.lambda, p.mean, p.stderr);
            }
            let fit = fit_exponential(curve, default_asymptote(curve)?)?;
            let _ = writeln!(
                fits_csv,
                "{label},{},{},{},{},{},{},{},{}",
                curve.method,
                fit.a,
                fit.b,
                fit.c,
                fit.residual_rms,
                fit.converged,
                fit.zero_noise(),
                noiseless
            );
            plot.push(Series::markers(format!("{} data", curve.method), curve.points.iter().map(|p| (p.lambda, p.mean)).collect()));
            let line = (0..=60).map(|k| top * k as f64 / 60.0).map(|l| (l, fit.eval(l))).collect();
            plot.push(Series::line(format!("{} fit", curve.method), line));
        }
        plot.push(Series::markers("noiseless", vec![(0.0, noiseless)]));
        w.write(&format!("zne_{label}.svg"), &plot.render())?;
    }
    w.write("zne_curves.csv", &curves_csv)?;
    w.write("zne_fits.csv", &fits_csv)
}

fn comparison(cfg: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let specs = CircuitSpec::batch(cfg.family.clone(), cfg.seed, cfg.n_circuits);
    let methods: Vec<ScalingKind> = cfg.methods.iter().copied().filter(|&m| m != ScalingKind::Ideal).collect();
    let spectra = models(cfg)?;
    let table = method_comparison(&specs, &methods, &spectra, &run_config(cfg))?;
    for (label, _) in &spectra {
        let mut plot = Plot::new(
            format!("Relative scaling error, {} circuits, {label} noise", cfg.family.name()),
            "lambda (scale factor)",
            "mean relative error",
        );
        for &m in &methods {
            let pts = table.rows.iter().filter(|r| &r.spectrum == label && r.method == m).map(|r| (r.lambda, r.mean_delta)).collect();
            let mut s = Series::line(m.name(), pts);
            s.markers = true;
            plot.push(s);
        }
        w.write(&format!("comparison_{label}.svg"), &plot.render())?;
    }
    w.write("comparison.csv", &table.to_csv())
}

fn filter_response(cfg: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let inst = CircuitSpec::new(cfg.family.clone(), cfg.seed).build()?;
    let omegas = uniform_grid(0.0, PI, cfg.points);
    let mut csv = String::from("method,lambda (scale factor),axis,component,omega (rad per slot),response (normalized)\n");
    for &m in &cfg.methods {
        let curves = normalized_max_ff(&inst.circuit, m, &cfg.lambdas, &omegas)?;
        let mut plot = Plot::new(format!("Filter response, {m}"), "omega (rad per slot)", "normalized filter function");
        for c in &curves {
            for (om, v) in c.omegas.iter().zip(&c.values) {
                let _ = writeln!(csv, "{m},{},{},{},{om},{v}", c.lambda, c.axis, c.component);
            }
            plot.push(Series::line(format!("lambda {}", c.lambda), c.omegas.iter().copied().zip(c.values.iter().copied()).collect()));
        }
        w.write(&format!("filter_{m}.svg"), &plot.render())?;
    }
    w.write("filter_response.csv", &csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn spectra_run_writes_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::new(ExperimentKind::Spectra, 1);
        cfg.out_dir = dir.path().to_path_buf();
        cfg.points = 129;
        let summary = run(&cfg).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("spectra.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1 + 4 * 129);
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 4));
        let names: Vec<&str> = summary.manifest.artifacts.iter().map(|a| a.file.as_str()).collect();
        assert_eq!(names, ["spectra.csv", "spectra.svg"]);
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["seed"], 1);
        assert_eq!(manifest["artifacts"][0]["sha256"], sha256_hex(csv.as_bytes()));
    }

    #[test]
    fn zero_threads_is_rejected() {
        let cfg = ExperimentConfig::new(ExperimentKind::Spectra, 1);
        assert!(run_with_threads(&cfg, Some(0)).is_err());
    }
}
