//! Noisy trajectory simulation.
//!
//! Each trajectory draws, per qubit, one Gaussian input sequence from the
//! stream `(seed, key, trajectory, qubit)` and one shot uniform from
//! `(seed, key, trajectory, SHOT_LANE)`. Every cell (a scaled circuit and its
//! noise model) simulated in the same call reuses those draws, so curves for
//! different methods and scale factors of one circuit share their randomness.
//! For any single cell the draws are exactly those of a freshly seeded
//! [`NoiseGenerator`](crate::arma::NoiseGenerator) per qubit.
//!
//! Dephasing `⊗_q exp(i y_q σ^z_q)` is applied after every moment, idle
//! moments included. Results are collected in trajectory order, so they do
//! not depend on the number of worker threads.

use crate::arma::{burn_in_steps, render, ArmaModel};
use crate::error::{Error, Result};
use crate::quantum::{apply_gate_slice, c, unitary_of, Circuit, Moment, Observable, ObservableKind, StateVector};
use crate::rng::{RandomStream, StreamId, SHOT_LANE};
use crate::scaling::{scale, ScaledInstance, ScalingKind, ScalingMethod};
use crate::zoo::CircuitSpec;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Default number of trajectories (one shot each).
pub const DEFAULT_TRAJECTORIES: usize = 3000;

/// Default scale factors: odd integers, legal for every method.
pub const DEFAULT_LAMBDAS: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 9.0];

const DENSE_MAX_QUBITS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub trajectories: usize,
    pub seed: u64,
    pub lambdas: Vec<f64>,
    /// Average exact per-trajectory expectations instead of sampling shots.
    #[serde(default)]
    pub exact: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { trajectories: DEFAULT_TRAJECTORIES, seed: 0, lambdas: DEFAULT_LAMBDAS.to_vec(), exact: false }
    }
}

impl RunConfig {
    pub fn new(trajectories: usize, seed: u64) -> Self {
        Self { trajectories, seed, ..Self::default() }
    }

    pub fn with_lambdas(mut self, lambdas: &[f64]) -> Self {
        self.lambdas = lambdas.to_vec();
        self
    }

    pub fn exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trajectories == 0 {
            return Err(Error::InvalidArgument("trajectories must be at least 1".into()));
        }
        if self.trajectories >= 1 << 48 {
            return Err(Error::InvalidArgument("too many trajectories".into()));
        }
        if self.lambdas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("scale factors must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// `true` when exact expectations were averaged instead of shots.
    pub exact: bool,
}

impl Estimate {
    fn from_samples(values: &[f64], exact: bool) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self { mean, stderr: (var / n).sqrt(), exact }
    }
}

enum Kernel {
    Idle,
    Dense(Vec<C64>),
    Gates(Moment),
}

struct Prepared {
    kernels: Vec<Kernel>,
    model: usize,
}

fn prepare(circuit: &Circuit) -> Result<Vec<Kernel>> {
    let n = circuit.n_qubits();
    circuit
        .moments()
        .iter()
        .map(|m| {
            if m.gates().iter().all(|g| g.is_identity()) {
                return Ok(Kernel::Idle);
            }
            if n > DENSE_MAX_QUBITS {
                return Ok(Kernel::Gates(m.clone()));
            }
            let single = Circuit::from_moments(n, vec![m.clone()])?;
            let u = unitary_of(&single)?;
            let dim = u.nrows();
            Ok(Kernel::Dense((0..dim * dim).map(|k| u[(k / dim, k % dim)]).collect()))
        })
        .collect()
}

fn apply_kernel(k: &Kernel, amps: &mut [C64], scratch: &mut [C64], n: usize) {
    match k {
        Kernel::Idle => {}
        Kernel::Dense(u) => {
            let dim = amps.len();
            for (r, out) in scratch.iter_mut().enumerate() {
                let row = &u[r * dim..(r + 1) * dim];
                *out = row.iter().zip(amps.iter()).map(|(a, b)| a * b).sum();
            }
            amps.copy_from_slice(scratch);
        }
        Kernel::Gates(m) => {
            for g in m.gates() {
                if !g.is_identity() {
                    apply_gate_slice(amps, n, g);
                }
            }
        }
    }
}

fn dephase(amps: &mut [C64], n: usize, angles: &[f64]) {
    let mut ph = [c(1.0, 0.0); crate::quantum::MAX_QUBITS];
    for (p, &y) in ph.iter_mut().zip(angles) {
        *p = C64::from_polar(1.0, y);
    }
    for (i, a) in amps.iter_mut().enumerate() {
        let mut f = c(1.0, 0.0);
        for (q, p) in ph[..n].iter().enumerate() {
            if (i >> (n - 1 - q)) & 1 == 0 {
                f *= p;
            } else {
                f *= p.conj();
            }
        }
        *a *= f;
    }
}

fn expectation(amps: &[C64], obs: &Observable) -> f64 {
    if let ObservableKind::Projector(bits) = &obs.kind {
        let k = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        return amps[k].norm_sqr();
    }
    let m = &obs.matrix;
    let dim = amps.len();
    let mut acc = c(0.0, 0.0);
    for col in 0..dim {
        let mut s = c(0.0, 0.0);
        for row in 0..dim {
            s += amps[row].conj() * m[(row, col)];
        }
        acc += s * amps[col];
    }
    acc.re
}

/// Simulates several scaled instances of one circuit with shared randomness.
///
/// `key` selects the random streams (normally the circuit index). Shot
/// sampling requires a projector observable; any other observable is averaged
/// exactly and the returned estimates are flagged `exact`.
pub fn run_cells(cells: &[ScaledInstance], observable: &Observable, key: u64, cfg: &RunConfig) -> Result<Vec<Estimate>> {
    cfg.validate()?;
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    let n = cells[0].circuit.n_qubits();
    for cell in cells {
        if cell.circuit.n_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: cell.circuit.n_qubits() });
        }
    }
    if observable.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: observable.n_qubits() });
    }
    let exact = cfg.exact || !matches!(observable.kind, ObservableKind::Projector(_));

    let mut models: Vec<ArmaModel> = Vec::new();
    let mut horizon: Vec<usize> = Vec::new();
    let mut prepared = Vec::with_capacity(cells.len());
    for cell in cells {
        let idx = match models.iter().position(|m| *m == cell.model) {
            Some(i) => i,
            None => {
                models.push(cell.model.clone());
                horizon.push(0);
                models.len() - 1
            }
        };
        horizon[idx] = horizon[idx].max(cell.circuit.depth());
        prepared.push(Prepared { kernels: prepare(&cell.circuit)?, model: idx });
    }
    let silent: Vec<bool> = models.iter().map(|m| m.is_zero()).collect();
    let n_inputs = models
        .iter()
        .zip(&horizon)
        .filter(|(m, _)| !m.is_zero())
        .map(|(m, &h)| {
            let (p, q) = m.order();
            burn_in_steps(p, q) + h
        })
        .max()
        .unwrap_or(0);

    let dim = 1usize << n;
    let per_trajectory: Vec<Vec<f64>> = (0..cfg.trajectories as u64)
        .into_par_iter()
        .map(|t| {
            let inputs: Vec<Vec<f64>> = (0..n)
                .map(|q| {
                    let mut s = RandomStream::new(StreamId::new(cfg.seed, key, t, q as u32));
                    (0..n_inputs).map(|_| s.gaussian()).collect()
                })
                .collect();
            let u = RandomStream::new(StreamId::new(cfg.seed, key, t, SHOT_LANE)).uniform();
            // noise[model][qubit][slot]
            let noise: Vec<Vec<Vec<f64>>> = models
                .iter()
                .zip(&horizon)
                .map(|(m, &h)| {
                    inputs
                        .iter()
                        .map(|x| {
                            let mut out = vec![0.0; h];
                            render(m, x, &mut out);
                            out
                        })
                        .collect()
                })
                .collect();

            let mut amps = vec![c(0.0, 0.0); dim];
            let mut scratch = vec![c(0.0, 0.0); dim];
            let mut angles = vec![0.0; n];
            prepared
                .iter()
                .map(|cell| {
                    amps.fill(c(0.0, 0.0));
                    amps[0] = c(1.0, 0.0);
                    let ys = &noise[cell.model];
                    for (slot, k) in cell.kernels.iter().enumerate() {
                        apply_kernel(k, &mut amps, &mut scratch, n);
                        if !silent[cell.model] {
                            for (a, y) in angles.iter_mut().zip(ys) {
                                *a = y[slot];
                            }
                            dephase(&mut amps, n, &angles);
                        }
                    }
                    let p = expectation(&amps, observable);
                    if exact {
                        p
                    } else if u < p {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();

    let mut column = vec![0.0; cfg.trajectories];
    Ok((0..cells.len())
        .map(|j| {
            for (v, row) in column.iter_mut().zip(&per_trajectory) {
                *v = row[j];
            }
            Estimate::from_samples(&column, exact)
        })
        .collect())
}

/// Mean and standard error of the observable for one circuit and noise model.
pub fn run_noisy(circuit: &Circuit, model: &ArmaModel, observable: &Observable, cfg: &RunConfig) -> Result<Estimate> {
    let cell = ScaledInstance {
        circuit: circuit.clone(),
        model: model.clone(),
        method: ScalingMethod { kind: ScalingKind::Ideal, lambda: 1.0 },
    };
    Ok(run_cells(&[cell], observable, 0, cfg)?[0])
}

/// `exp(−2 Var(Σ_{k=1..K} y_k))`: the exact coherence `⟨σ^x⟩` of `|+⟩` after
/// `K` dephasing slots.
pub fn gaussian_dephasing_oracle(model: &ArmaModel, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (-2.0 * sum_variance(model, k)).exp()
}

/// `Var(Σ_{k=1..K} y_k) = K γ₀ + 2 Σ_{l≥1} (K − l) γ_l`.
pub fn sum_variance(model: &ArmaModel, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let gamma = model.autocovariance(k - 1);
    let mut v = k as f64 * gamma[0];
    for (l, g) in gamma.iter().enumerate().skip(1) {
        v += 2.0 * (k - l) as f64 * g;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda: f64,
    pub mean: f64,
    pub stderr: f64,
}

/// Noise-scaled expectation values `E(λ)` of one circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationCurve {
    pub points: Vec<CurvePoint>,
    pub method: ScalingKind,
    pub spectrum: String,
    pub circuit: Option<CircuitSpec>,
    pub trajectories: usize,
    pub exact: bool,
}

impl ExpectationCurve {
    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    pub fn at(&self, lambda: f64) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.lambda == lambda)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda (scale factor),mean (expectation),stderr (expectation)\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{},{}", p.lambda, p.mean, p.stderr);
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serialises")
    }
}

/// Cells for every `(method, λ)` pair, in the given order.
pub fn scaled_cells(
    circuit: &Circuit,
    model: &ArmaModel,
    methods: &[ScalingKind],
    lambdas: &[f64],
) -> Result<Vec<ScaledInstance>> {
    let mut cells = Vec::with_capacity(methods.len() * lambdas.len());
    for &kind in methods {
        for &lambda in lambdas {
            cells.push(scale(ScalingMethod::new(kind, lambda)?, circuit, model)?);
        }
    }
    Ok(cells)
}

/// Curves for several methods of one circuit, simulated together.
pub fn expectation_curves(
    spec: &CircuitSpec,
    methods: &[ScalingKind],
    model: &ArmaModel,
    spectrum: &str,
    cfg: &RunConfig,
) -> Result<Vec<ExpectationCurve>> {
    cfg.validate()?;
    let inst = spec.build()?;
    let cells = scaled_cells(&inst.circuit, model, methods, &cfg.lambdas)?;
    let est = run_cells(&cells, &inst.observable, spec.seed, cfg)?;
    let per = cfg.lambdas.len();
    Ok(methods
        .iter()
        .enumerate()
        .map(|(i, &method)| ExpectationCurve {
            points: cfg
                .lambdas
                .iter()
                .zip(&est[i * per..(i + 1) * per])
                .map(|(&lambda, e)| CurvePoint { lambda, mean: e.mean, stderr: e.stderr })
                .collect(),
            method,
            spectrum: spectrum.to_string(),
            circuit: Some(spec.clone()),
            trajectories: cfg.trajectories,
            exact: est.first().map_or(cfg.exact, |e| e.exact),
        })
        .collect())
}

pub fn expectation_curve(
    spec: &CircuitSpec,
    method: ScalingKind,
    model: &ArmaModel,
    spectrum: &str,
    cfg: &RunConfig,
) -> Result<ExpectationCurve> {
    Ok(expectation_curves(spec, &[method], model, spectrum, cfg)?.remove(0))
}

/// `E*(λ)`: the curve under the ideally scaled spectrum.
pub fn true_scaled_curve(spec: &CircuitSpec, model: &ArmaModel, spectrum: &str, cfg: &RunConfig) -> Result<ExpectationCurve> {
    expectation_curve(spec, ScalingKind::Ideal, model, spectrum, cfg)
}

/// Noiseless expectation of a circuit, by direct state-vector simulation.
pub fn noiseless_expectation(circuit: &Circuit, observable: &Observable) -> Result<f64> {
    let mut s = StateVector::zero(circuit.n_qubits())?;
    s.apply_circuit(circuit)?;
    s.expectation(observable)
}
