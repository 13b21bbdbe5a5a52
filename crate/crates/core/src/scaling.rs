//! Noise scaling: circuit transforms and noise-model transforms behind one dispatch.

use crate::arma::{stretch_model, ArmaModel, NoiseGenerator, DEFAULT_TAPS};
use crate::error::{Error, Result};
use crate::quantum::{c, max_abs, CMatrix, Circuit, Gate, GateKind, Moment};
use crate::rng::StreamId;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// `U (U† U)^n`: the original moments, then `n` rounds of reversed adjoints and originals.
pub fn fold_global(circuit: &Circuit, n: usize) -> Circuit {
    let inv = circuit.inverse();
    let mut moments = circuit.moments().to_vec();
    for _ in 0..n {
        moments.extend(inv.moments().iter().cloned());
        moments.extend(circuit.moments().iter().cloned());
    }
    Circuit::from_moments(circuit.n_qubits(), moments).expect("targets already validated")
}

/// Each moment `m` becomes `m, m†, m, …, m` (`1 + 2n` moments).
pub fn fold_local(circuit: &Circuit, n: usize) -> Circuit {
    let mut moments = Vec::with_capacity(circuit.depth() * (1 + 2 * n));
    for m in circuit.moments() {
        let adj = m.adjoint();
        moments.push(m.clone());
        for _ in 0..n {
            moments.push(adj.clone());
            moments.push(m.clone());
        }
    }
    Circuit::from_moments(circuit.n_qubits(), moments).expect("targets already validated")
}

const ROOT_RESIDUAL: f64 = 1e-8;

/// `G^{1/λ}` on the principal branch: eigenphases in `(−π, π]` divided by `λ`.
pub fn gate_root(gate: &Gate, lambda: usize) -> Result<Gate> {
    if lambda == 0 {
        return Err(Error::InvalidScaleFactor { lambda: 0.0, reason: "root order must be at least 1".into() });
    }
    if lambda == 1 || gate.is_identity() {
        return Ok(gate.clone());
    }
    let l = lambda as f64;
    let named = match gate.kind() {
        GateKind::Rx(t) if t.abs() < 2.0 * PI => Some(GateKind::Rx(t / l)),
        GateKind::Ry(t) if t.abs() < 2.0 * PI => Some(GateKind::Ry(t / l)),
        GateKind::Rz(t) if t.abs() < 2.0 * PI => Some(GateKind::Rz(t / l)),
        GateKind::Rzz(t) if t.abs() < 2.0 * PI => Some(GateKind::Rzz(t / l)),
        _ => None,
    };
    if let Some(kind) = named {
        return Gate::named(kind, gate.targets());
    }

    let g = gate.matrix();
    let dim = g.nrows();
    let schur = g.clone().schur();
    let (q, t) = schur.unpack();
    // A unitary is normal, so its Schur form is diagonal.
    let mut off = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                off = off.max(t[(i, j)].norm());
            }
        }
    }
    let recon = &q * &t * q.adjoint();
    let residual = off.max(max_abs(&(recon - g)));
    if !(residual <= ROOT_RESIDUAL) {
        return Err(Error::DefectiveEigendecomposition { residual });
    }
    let mut d = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut phi = t[(i, i)].arg();
        if phi <= -PI + 1e-12 {
            phi = PI;
        }
        d[(i, i)] = c(0.0, phi / l).exp();
    }
    let root = &q * d * q.adjoint();
    Gate::unitary(gate.targets(), root)
}

/// Each moment becomes `λ` moments of its gates' `λ`-th roots.
pub fn trotterize(circuit: &Circuit, lambda: usize) -> Result<Circuit> {
    if lambda == 0 {
        return Err(Error::InvalidScaleFactor { lambda: 0.0, reason: "Trotter factor must be at least 1".into() });
    }
    let mut moments = Vec::with_capacity(circuit.depth() * lambda);
    for m in circuit.moments() {
        let roots = Moment::new(m.gates().iter().map(|g| gate_root(g, lambda)).collect::<Result<_>>()?)?;
        for _ in 0..lambda {
            moments.push(roots.clone());
        }
    }
    Circuit::from_moments(circuit.n_qubits(), moments)
}

/// The five scaling strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingKind {
    Ideal,
    PulseStretch,
    GlobalFold,
    LocalFold,
    GateTrotter,
}

impl ScalingKind {
    pub const ALL: [ScalingKind; 5] = [
        ScalingKind::Ideal,
        ScalingKind::PulseStretch,
        ScalingKind::GlobalFold,
        ScalingKind::LocalFold,
        ScalingKind::GateTrotter,
    ];

    /// Methods that can be realised without access to the noise itself.
    pub const DIGITAL: [ScalingKind; 4] =
        [ScalingKind::PulseStretch, ScalingKind::GlobalFold, ScalingKind::LocalFold, ScalingKind::GateTrotter];

    pub fn name(self) -> &'static str {
        match self {
            ScalingKind::Ideal => "ideal",
            ScalingKind::PulseStretch => "pulse_stretch",
            ScalingKind::GlobalFold => "global_fold",
            ScalingKind::LocalFold => "local_fold",
            ScalingKind::GateTrotter => "gate_trotter",
        }
    }

    /// Checks that `lambda` is a legal factor for this method.
    pub fn validate(self, lambda: f64) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidScaleFactor { lambda, reason: reason.into() });
        if !lambda.is_finite() {
            return bad("scale factor must be finite");
        }
        match self {
            ScalingKind::Ideal if lambda < 0.0 => bad("scale factor must be non-negative"),
            ScalingKind::PulseStretch if lambda < 1.0 => bad("scale factor must be at least 1"),
            ScalingKind::GlobalFold | ScalingKind::LocalFold => {
                if lambda < 1.0 || lambda.fract() != 0.0 || (lambda as u64).is_multiple_of(2) {
                    bad("scale factor must be odd")
                } else {
                    Ok(())
                }
            }
            ScalingKind::GateTrotter if lambda < 1.0 || lambda.fract() != 0.0 => {
                bad("scale factor must be a positive integer")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ScalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "ideal" => Ok(ScalingKind::Ideal),
            "pulsestretch" | "stretch" => Ok(ScalingKind::PulseStretch),
            "globalfold" | "global" => Ok(ScalingKind::GlobalFold),
            "localfold" | "local" => Ok(ScalingKind::LocalFold),
            "gatetrotter" | "trotter" => Ok(ScalingKind::GateTrotter),
            _ => Err(Error::InvalidArgument(format!("unknown scaling method '{s}'"))),
        }
    }
}

/// A method together with its scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingMethod {
    pub kind: ScalingKind,
    pub lambda: f64,
}

impl ScalingMethod {
    pub fn new(kind: ScalingKind, lambda: f64) -> Result<Self> {
        kind.validate(lambda)?;
        Ok(Self { kind, lambda })
    }
}

/// A circuit and the noise model to run it under.
#[derive(Debug, Clone)]
pub struct ScaledInstance {
    pub circuit: Circuit,
    pub model: ArmaModel,
    pub method: ScalingMethod,
}

impl ScaledInstance {
    pub fn generator(&self, id: StreamId) -> NoiseGenerator {
        NoiseGenerator::new(&self.model, id)
    }
}

/// Applies a scaling method with the default FIR length for pulse stretching.
pub fn scale(method: ScalingMethod, circuit: &Circuit, model: &ArmaModel) -> Result<ScaledInstance> {
    scale_with_taps(method, circuit, model, DEFAULT_TAPS)
}

pub fn scale_with_taps(
    method: ScalingMethod,
    circuit: &Circuit,
    model: &ArmaModel,
    n_taps: usize,
) -> Result<ScaledInstance> {
    method.kind.validate(method.lambda)?;
    let lambda = method.lambda;
    let (circuit, model) = match method.kind {
        ScalingKind::Ideal => (circuit.clone(), model.scale_power(lambda)?),
        ScalingKind::PulseStretch if lambda == 1.0 => (circuit.clone(), model.clone()),
        ScalingKind::PulseStretch => (circuit.clone(), stretch_model(model, lambda, n_taps)?),
        ScalingKind::GlobalFold => (fold_global(circuit, (lambda as usize - 1) / 2), model.clone()),
        ScalingKind::LocalFold => (fold_local(circuit, (lambda as usize - 1) / 2), model.clone()),
        ScalingKind::GateTrotter => (trotterize(circuit, lambda as usize)?, model.clone()),
    };
    Ok(ScaledInstance { circuit, model, method })
}
