//! Experiment configuration files.
//!
//! ```toml
//! kind = "method_comparison"
//! seed = 7
//! out_dir = "out/comparison"
//!
//! [circuit]
//! family = "rb"
//! n_qubits = 2
//! clifford_depth = 2
//!
//! [noise]
//! presets = ["white", "pink"]
//! power = 1e-4
//!
//! [scaling]
//! methods = ["pulse_stretch", "global_fold", "local_fold", "gate_trotter"]
//! lambdas = [1, 3, 5, 7, 9]
//!
//! [run]
//! trajectories = 3000
//! n_circuits = 50
//! ```

use crate::arma::Preset;
use crate::error::{Error, Result};
use crate::monte_carlo::{DEFAULT_LAMBDAS, DEFAULT_TRAJECTORIES};
use crate::scaling::ScalingKind;
use crate::zoo::Family;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use toml::Spanned;

pub const DEFAULT_POWER: f64 = 1e-4;
pub const DEFAULT_CIRCUITS: usize = 50;
pub const DEFAULT_POINTS: usize = 2048;
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Spectra,
    ZneSingle,
    MethodComparison,
    FilterResponse,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectra => "spectra",
            ExperimentKind::ZneSingle => "zne_single",
            ExperimentKind::MethodComparison => "method_comparison",
            ExperimentKind::FilterResponse => "filter_response",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "spectra" => Ok(ExperimentKind::Spectra),
            "zne_single" => Ok(ExperimentKind::ZneSingle),
            "method_comparison" => Ok(ExperimentKind::MethodComparison),
            "filter_response" => Ok(ExperimentKind::FilterResponse),
            other => Err(Error::InvalidArgument(format!("unknown experiment kind '{other}'"))),
        }
    }
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub family: Family,
    pub presets: Vec<Preset>,
    pub power: f64,
    pub methods: Vec<ScalingKind>,
    pub lambdas: Vec<f64>,
    pub trajectories: usize,
    pub n_circuits: usize,
    /// Frequency grid size for spectra and filter responses.
    pub points: usize,
}

impl ExperimentConfig {
    /// Defaults for every field but the kind and seed.
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            family: Family::Rb { n_qubits: 2, clifford_depth: 2 },
            presets: Preset::ALL.to_vec(),
            power: DEFAULT_POWER,
            methods: ScalingKind::ALL.to_vec(),
            lambdas: DEFAULT_LAMBDAS.to_vec(),
            trajectories: DEFAULT_TRAJECTORIES,
            n_circuits: DEFAULT_CIRCUITS,
            points: DEFAULT_POINTS,
        }
    }

    /// Parses and checks a config, returning every problem found.
    pub fn parse(text: &str) -> std::result::Result<Self, Vec<Error>> {
        Parser { text, errors: Vec::new() }.parse()
    }

    pub fn from_path(path: &Path) -> std::result::Result<Self, Vec<Error>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| vec![Error::Config { line: None, message: format!("cannot read {}: {e}", path.display()) }])?;
        Self::parse(&text)
    }
}

/// Problems found by [`validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<Error>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Schema and referential checks without running anything.
pub fn validate(text: &str) -> ValidationReport {
    match ExperimentConfig::parse(text) {
        Ok(_) => ValidationReport::default(),
        Err(errors) => ValidationReport { errors },
    }
}

pub fn validate_path(path: &Path) -> ValidationReport {
    match ExperimentConfig::from_path(path) {
        Ok(_) => ValidationReport::default(),
        Err(errors) => ValidationReport { errors },
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Option<Spanned<String>>,
    seed: Option<Spanned<i64>>,
    out_dir: Option<String>,
    circuit: Option<Spanned<toml::Table>>,
    noise: Option<RawNoise>,
    scaling: Option<RawScaling>,
    run: Option<RawRun>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    presets: Option<Vec<Spanned<String>>>,
    power: Option<Spanned<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScaling {
    methods: Option<Vec<Spanned<String>>>,
    lambdas: Option<Spanned<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    trajectories: Option<Spanned<i64>>,
    n_circuits: Option<Spanned<i64>>,
    points: Option<Spanned<i64>>,
}

struct Parser<'a> {
    text: &'a str,
    errors: Vec<Error>,
}

impl Parser<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }

    fn error(&mut self, span: Option<Range<usize>>, message: impl Into<String>) {
        let line = span.map(|s| self.line(s));
        self.errors.push(Error::Config { line, message: message.into() });
    }

    fn positive(&mut self, v: &Option<Spanned<i64>>, name: &str, default: usize) -> usize {
        match v {
            None => default,
            Some(s) if *s.get_ref() >= 1 => *s.get_ref() as usize,
            Some(s) => {
                self.error(Some(s.span()), format!("{name} must be at least 1, got {}", s.get_ref()));
                default
            }
        }
    }

    fn parse(mut self) -> std::result::Result<ExperimentConfig, Vec<Error>> {
        let raw: RawConfig = match toml::from_str(self.text) {
            Ok(r) => r,
            Err(e) => {
                let line = e.span().map(|s| self.line(s));
                return Err(vec![Error::Config { line, message: e.message().trim().to_string() }]);
            }
        };

        let kind = match &raw.kind {
            None => {
                self.error(None, "missing required key 'kind'");
                None
            }
            Some(k) => match k.get_ref().parse::<ExperimentKind>() {
                Ok(kind) => Some(kind),
                Err(e) => {
                    self.error(Some(k.span()), e.to_string());
                    None
                }
            },
        };
        let seed = match &raw.seed {
            None => {
                self.error(None, "missing required key 'seed'");
                0
            }
            Some(s) if *s.get_ref() < 0 => {
                self.error(Some(s.span()), "seed must be non-negative");
                0
            }
            Some(s) => *s.get_ref() as u64,
        };
        let mut cfg = ExperimentConfig::new(kind.unwrap_or(ExperimentKind::Spectra), seed);
        if let Some(dir) = raw.out_dir {
            cfg.out_dir = PathBuf::from(dir);
        }

        if let Some(table) = &raw.circuit {
            match Family::deserialize(toml::Value::Table(table.get_ref().clone())) {
                Ok(f) => cfg.family = f,
                Err(e) => self.error(Some(table.span()), format!("circuit: {}", e.message().trim())),
            }
        }

        if let Some(noise) = &raw.noise {
            if let Some(names) = &noise.presets {
                cfg.presets.clear();
                for n in names {
                    match n.get_ref().parse::<Preset>() {
                        Ok(p) => cfg.presets.push(p),
                        Err(e) => self.error(Some(n.span()), e.to_string()),
                    }
                }
                if names.is_empty() {
                    self.error(None, "noise.presets must not be empty");
                }
            }
            if let Some(p) = &noise.power {
                if !(*p.get_ref() > 0.0 && p.get_ref().is_finite()) {
                    self.error(Some(p.span()), format!("noise power must be positive, got {}", p.get_ref()));
                } else {
                    cfg.power = *p.get_ref();
                }
            }
        }

        let mut lambda_span = None;
        let mut method_spans = Vec::new();
        if let Some(scaling) = &raw.scaling {
            if let Some(names) = &scaling.methods {
                cfg.methods.clear();
                for n in names {
                    match n.get_ref().parse::<ScalingKind>() {
                        Ok(m) => {
                            cfg.methods.push(m);
                            method_spans.push(Some(n.span()));
                        }
                        Err(e) => self.error(Some(n.span()), e.to_string()),
                    }
                }
            }
            if let Some(l) = &scaling.lambdas {
                cfg.lambdas = l.get_ref().clone();
                lambda_span = Some(l.span());
            }
        }
        if method_spans.is_empty() {
            method_spans = vec![None; cfg.methods.len()];
        }
        if cfg.lambdas.is_empty() {
            self.error(lambda_span.clone(), "scaling.lambdas must not be empty");
        } else if cfg.lambdas.windows(2).any(|w| w[1] <= w[0]) {
            self.error(lambda_span.clone(), "scaling.lambdas must be strictly increasing");
        }
        for (m, span) in cfg.methods.clone().into_iter().zip(method_spans) {
            if let Some(bad) = cfg.lambdas.iter().find_map(|&l| m.validate(l).err()) {
                self.error(span.or(lambda_span.clone()), format!("{m}: {bad}"));
            }
        }

        if let Some(run) = &raw.run {
            cfg.trajectories = self.positive(&run.trajectories, "run.trajectories", DEFAULT_TRAJECTORIES);
            cfg.n_circuits = self.positive(&run.n_circuits, "run.n_circuits", DEFAULT_CIRCUITS);
            cfg.points = self.positive(&run.points, "run.points", DEFAULT_POINTS);
            if cfg.points < 2 {
                self.error(run.points.as_ref().map(|p| p.span()), "run.points must be at least 2");
            }
        }

        if let Some(kind) = kind {
            self.check_kind(kind, &cfg, lambda_span);
        }
        if self.errors.is_empty() {
            Ok(cfg)
        } else {
            Err(self.errors)
        }
    }

    fn check_kind(&mut self, kind: ExperimentKind, cfg: &ExperimentConfig, lambda_span: Option<Range<usize>>) {
        match kind {
            ExperimentKind::ZneSingle if cfg.lambdas.len() < 3 => {
                self.error(lambda_span, "zne_single needs at least 3 scale factors to fit");
            }
            ExperimentKind::MethodComparison if !cfg.methods.iter().any(|&m| m != ScalingKind::Ideal) => {
                self.error(None, "method_comparison needs at least one method other than ideal");
            }
            ExperimentKind::FilterResponse => {
                if let Family::Rb { n_qubits, .. } | Family::Mirror { n_qubits, .. } = cfg.family {
                    if n_qubits > crate::filter::MAX_FILTER_QUBITS {
                        self.error(None, format!("filter_response supports at most {} qubits", crate::filter::MAX_FILTER_QUBITS));
                    }
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID: &str = r#"
kind = "method_comparison"
seed = 3

[circuit]
family = "rb"
n_qubits = 2
clifford_depth = 2

[noise]
presets = ["pink"]

[scaling]
methods = ["global_fold", "local_fold"]
lambdas = [1, 3, 5]

[run]
trajectories = 100
n_circuits = 4
"#;

    #[test]
    fn valid_config_has_empty_report() {
        assert!(validate(VALID).is_ok());
        let cfg = ExperimentConfig::parse(VALID).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::MethodComparison);
        assert_eq!(cfg.presets, vec![Preset::Pink]);
        assert_eq!(cfg.lambdas, vec![1.0, 3.0, 5.0]);
        assert_eq!(cfg.n_circuits, 4);
        assert_eq!(cfg.power, DEFAULT_POWER);
    }

    #[test]
    fn unknown_method_is_one_error_on_its_line() {
        let text = VALID.replace("\"local_fold\"", "\"warp_drive\"");
        let report = validate(&text);
        assert_eq!(report.errors.len(), 1, "{report}");
        match &report.errors[0] {
            Error::Config { line, message } => {
                assert_eq!(*line, Some(14));
                assert!(message.contains("warp_drive"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn even_scale_factor_for_folding() {
        let text = VALID.replace("lambdas = [1, 3, 5]", "lambdas = [1, 2, 3]");
        let report = validate(&text);
        assert_eq!(report.errors.len(), 2);
        assert!(report.errors.iter().all(|e| e.to_string().contains("scale factor must be odd")));
    }

    #[test]
    fn missing_seed_and_bad_preset() {
        let text = VALID.replace("seed = 3\n", "").replace("\"pink\"", "\"purple\"");
        let report = validate(&text);
        assert_eq!(report.errors.len(), 2, "{report}");
        assert!(report.to_string().contains("seed"));
        assert!(report.to_string().contains("line 10"));
    }

    #[test]
    fn syntax_errors_are_line_anchored() {
        let text = "kind = \"spectra\"\nseed = 1\n[noise\n";
        let report = validate(text);
        assert_eq!(report.errors.len(), 1);
        assert!(report.to_string().contains("line 3"), "{report}");
        let typo = "kind = \"spectra\"\nseed = 1\nsede = 2\n";
        assert!(validate(typo).to_string().contains("line 3"));
    }
}
