//! Exponential fits, zero-noise extrapolation and the relative scaling error.

use crate::arma::ArmaModel;
use crate::error::{Error, Result};
use crate::monte_carlo::{expectation_curves, ExpectationCurve, RunConfig};
use crate::scaling::ScalingKind;
use crate::zoo::CircuitSpec;
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Points closer than this to the asymptote are left out of the log-linear start.
const LOG_FLOOR: f64 = 1e-9;
const MAX_ITERATIONS: usize = 500;

/// `E(λ) = A + B·exp(−cλ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual_rms: f64,
    pub converged: bool,
}

impl ExpFit {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.a + self.b * (-self.c * lambda).exp()
    }

    /// Value at `λ = 0`.
    pub fn zero_noise(&self) -> f64 {
        self.a + self.b
    }
}

fn sse(p: &Vector3<f64>, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(&l, &e)| (p[0] + p[1] * (-p[2] * l).exp() - e).powi(2)).sum()
}

fn with_rms(a: f64, b: f64, c: f64, x: &[f64], y: &[f64], converged: bool) -> ExpFit {
    let p = Vector3::new(a, b, c);
    ExpFit { a, b, c, residual_rms: (sse(&p, x, y) / x.len() as f64).sqrt(), converged }
}

/// Two-stage least-squares fit.
///
/// Stage 1 fixes `A = asymptote` and regresses `log(E − A)` on `λ`. Stage 2
/// refines `(A, B, c)` with damped Gauss–Newton steps, keeping `c ≥ 0`. If no
/// two points lie above the asymptote, the stage-1 result (`c = 0`,
/// `B = mean(E) − A`) is returned unconverged.
pub fn fit_points(lambdas: &[f64], values: &[f64], asymptote: f64) -> Result<ExpFit> {
    if lambdas.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: lambdas.len(), actual: values.len() });
    }
    if lambdas.len() < 3 {
        return Err(Error::NotEnoughData(format!("exponential fit needs at least 3 points, got {}", lambdas.len())));
    }
    if values.iter().chain(lambdas).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite data in fit".into()));
    }
    let x = lambdas;
    let y = values;

    let logs: Vec<(f64, f64)> =
        x.iter().zip(y).filter(|(_, &e)| e - asymptote > LOG_FLOOR).map(|(&l, &e)| (l, (e - asymptote).ln())).collect();
    let distinct = logs.windows(2).any(|w| w[0].0 != w[1].0);
    if logs.len() < 2 || !distinct {
        let b = y.iter().sum::<f64>() / y.len() as f64 - asymptote;
        return Ok(with_rms(asymptote, b, 0.0, x, y, false));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let start = Vector3::new(asymptote, (my - slope * mx).exp(), (-slope).max(0.0));

    let mut p = start;
    let mut cost = sse(&p, x, y);
    let mut mu = 1e-3;
    let mut converged = cost <= f64::EPSILON * f64::EPSILON;
    for _ in 0..MAX_ITERATIONS {
        if converged {
            break;
        }
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for (&l, &e) in x.iter().zip(y) {
            let ex = (-p[2] * l).exp();
            let r = p[0] + p[1] * ex - e;
            let j = Vector3::new(1.0, ex, -p[1] * l * ex);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let mut accepted = false;
        while mu < 1e12 {
            let mut h = jtj;
            for i in 0..3 {
                h[(i, i)] += mu * jtj[(i, i)].max(1e-12);
            }
            let Some(step) = h.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = p + step;
            trial[2] = trial[2].max(0.0);
            let c_new = sse(&trial, x, y);
            if c_new.is_finite() && c_new <= cost {
                let small_gain = cost - c_new <= 1e-14 * cost + 1e-30;
                let small_step = (trial - p).norm() <= 1e-12 * (p.norm() + 1e-12);
                p = trial;
                cost = c_new;
                mu = (mu / 3.0).max(1e-12);
                accepted = true;
                converged = small_gain || small_step;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            // No downhill step exists at any damping: a stationary point.
            converged = true;
            break;
        }
    }
    Ok(with_rms(p[0], p[1], p[2], x, y, converged))
}

/// Fits the curve's means against the given asymptote.
pub fn fit_exponential(curve: &ExpectationCurve, asymptote: f64) -> Result<ExpFit> {
    fit_points(&curve.lambdas(), &curve.means(), asymptote)
}

/// Depolarised asymptote of the curve's circuit observable.
pub fn default_asymptote(curve: &ExpectationCurve) -> Result<f64> {
    match &curve.circuit {
        Some(spec) => Ok(spec.build()?.observable.depolarized_value()),
        None => Err(Error::InvalidArgument("curve has no circuit to derive an asymptote from".into())),
    }
}

/// Extrapolated zero-noise value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneEstimate {
    pub value_at_zero: f64,
    pub fit: ExpFit,
    pub method: Option<ScalingKind>,
    pub spectrum: Option<String>,
    pub circuit: Option<CircuitSpec>,
}

pub fn extrapolate(fit: ExpFit) -> ZneEstimate {
    ZneEstimate { value_at_zero: fit.zero_noise(), fit, method: None, spectrum: None, circuit: None }
}

/// Fits and extrapolates a curve, keeping its metadata.
pub fn extrapolate_curve(curve: &ExpectationCurve, asymptote: f64) -> Result<ZneEstimate> {
    let fit = fit_exponential(curve, asymptote)?;
    Ok(ZneEstimate {
        method: Some(curve.method),
        spectrum: Some(curve.spectrum.clone()),
        circuit: curve.circuit.clone(),
        ..extrapolate(fit)
    })
}

/// `|(E − E*) / E*|`.
pub fn relative_error(e: f64, e_star: f64) -> Result<f64> {
    if e_star == 0.0 {
        return Err(Error::UndefinedRelativeError);
    }
    Ok(((e - e_star) / e_star).abs())
}

/// One row of a method comparison: statistics of `Δ(λ)` across circuits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub spectrum: String,
    pub method: ScalingKind,
    pub lambda: f64,
    pub mean_delta: f64,
    pub std_delta: f64,
    /// Root-mean-square over circuits of the shot-noise standard error of `Δ`.
    pub shot_band: f64,
    pub circuits: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn get(&self, spectrum: &str, method: ScalingKind, lambda: f64) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.spectrum == spectrum && r.method == method && r.lambda == lambda)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "spectrum,method,lambda (scale factor),mean_delta (relative),std_delta (relative),shot_band (relative),circuits (count)\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.spectrum, r.method, r.lambda, r.mean_delta, r.std_delta, r.shot_band, r.circuits
            );
        }
        s
    }
}

/// `Δ(λ)` of every method against the ideally scaled curve, per circuit and
/// then summarised across circuits.
///
/// Each circuit is simulated once per spectrum with all methods sharing
/// random streams. `spectra` pairs a label with its model.
pub fn method_comparison(
    specs: &[CircuitSpec],
    methods: &[ScalingKind],
    spectra: &[(String, ArmaModel)],
    cfg: &RunConfig,
) -> Result<ComparisonTable> {
    if specs.is_empty() {
        return Err(Error::InvalidArgument("method comparison needs at least one circuit".into()));
    }
    cfg.validate()?;
    let mut all = vec![ScalingKind::Ideal];
    all.extend(methods.iter().copied().filter(|&m| m != ScalingKind::Ideal));

    let mut table = ComparisonTable::default();
    for (label, model) in spectra {
        // deltas[method][lambda][circuit] = (Δ, σ_Δ)
        let mut deltas = vec![vec![Vec::with_capacity(specs.len()); cfg.lambdas.len()]; methods.len()];
        for spec in specs {
            let curves = expectation_curves(spec, &all, model, label, cfg)?;
            let ideal = &curves[0];
            for (mi, m) in methods.iter().enumerate() {
                let curve = &curves[all.iter().position(|k| k == m).expect("method listed")];
                for (li, (p, s)) in curve.points.iter().zip(&ideal.points).enumerate() {
                    let d = relative_error(p.mean, s.mean)?;
                    let band = ((p.stderr / s.mean).powi(2) + (p.mean * s.stderr / (s.mean * s.mean)).powi(2)).sqrt();
                    deltas[mi][li].push((d, band));
                }
            }
        }
        for (mi, &method) in methods.iter().enumerate() {
            for (li, &lambda) in cfg.lambdas.iter().enumerate() {
                let v = &deltas[mi][li];
                let n = v.len() as f64;
                let mean = v.iter().map(|x| x.0).sum::<f64>() / n;
                let std = if v.len() > 1 {
                    (v.iter().map(|x| (x.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                } else {
                    0.0
                };
                let band = (v.iter().map(|x| x.1 * x.1).sum::<f64>() / n).sqrt();
                table.rows.push(ComparisonRow {
                    spectrum: label.clone(),
                    method,
                    lambda,
                    mean_delta: mean,
                    std_delta: std,
                    shot_band: band,
                    circuits: v.len(),
                });
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 9.0];

    #[test]
    fn recovers_synthetic_exponential() {
        let y: Vec<f64> = GRID.iter().map(|&l| 0.25 + 0.75 * (-0.3 * l).exp()).collect();
        let f = fit_points(&GRID, &y, 0.25).unwrap();
        assert!((f.a - 0.25).abs() < 1e-6 && (f.b - 0.75).abs() < 1e-6 && (f.c - 0.3).abs() < 1e-6, "{f:?}");
        assert!(f.converged);
        assert!((extrapolate(f).value_at_zero - 1.0).abs() < 1e-6);
    }

    #[test]
    fn recovers_with_wrong_asymptote_hint() {
        let y: Vec<f64> = GRID.iter().map(|&l| 0.4 + 0.5 * (-0.2 * l).exp()).collect();
        let f = fit_points(&GRID, &y, 0.25).unwrap();
        assert!((f.a - 0.4).abs() < 1e-6 && (f.b - 0.5).abs() < 1e-6 && (f.c - 0.2).abs() < 1e-6, "{f:?}");
    }

    #[test]
    fn constant_and_degenerate_curves() {
        let f = fit_points(&GRID, &[0.25; 5], 0.25).unwrap();
        assert!(!f.converged);
        assert!(f.b.abs() < 1e-12);
        assert!((f.zero_noise() - 0.25).abs() < 1e-12);
        let below = fit_points(&GRID, &[0.1; 5], 0.25).unwrap();
        assert!(!below.converged);
        assert!((below.zero_noise() - 0.1).abs() < 1e-12);
        assert!(fit_points(&GRID[..2], &[0.5, 0.4], 0.25).is_err());
    }

    #[test]
    fn extrapolation_examples() {
        let f = ExpFit { a: 0.25, b: 0.75, c: 0.1, residual_rms: 0.0, converged: true };
        assert_eq!(extrapolate(f).value_at_zero, 1.0);
        let f = ExpFit { a: 0.5, b: 0.0, c: 3.0, residual_rms: 0.0, converged: true };
        assert_eq!(extrapolate(f).value_at_zero, 0.5);
    }

    #[test]
    fn relative_error_examples() {
        assert_eq!(relative_error(0.7, 0.7).unwrap(), 0.0);
        assert!((relative_error(1.1, 1.0).unwrap() - 0.1).abs() < 1e-12);
        assert!((relative_error(0.4, 0.5).unwrap() - 0.2).abs() < 1e-12);
        assert!(relative_error(0.4, 0.0).unwrap_err().to_string().contains("undefined relative error"));
    }

    proptest! {
        #[test]
        fn relative_error_is_scale_invariant(e in -10.0f64..10.0, s in 0.01f64..10.0, k in 0.1f64..100.0, neg in any::<bool>()) {
            let k = if neg { -k } else { k };
            let a = relative_error(e, s).unwrap();
            let b = relative_error(k * e, k * s).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }

        #[test]
        fn fit_self_consistency(a in 0.0f64..0.5, b in 0.1f64..1.0, c in 0.01f64..0.5) {
            let y: Vec<f64> = GRID.iter().map(|&l| a + b * (-c * l).exp()).collect();
            let f = fit_points(&GRID, &y, a).unwrap();
            prop_assert!((f.a - a).abs() < 1e-6 && (f.b - b).abs() < 1e-6 && (f.c - c).abs() < 1e-6);
        }
    }
}
