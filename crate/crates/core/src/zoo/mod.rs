//! Seeded generators for benchmark circuit families.
//!
//! Every generator draws from its own random stream keyed by the seed, so a
//! seed fixes the circuit completely.

mod clifford;

pub use clifford::{Op, C1, C2};

use crate::error::{Error, Result};
use crate::quantum::{c, unitary_of, CMatrix, Circuit, Gate, GateKind, Moment, Observable, StateVector};
use crate::rng::{RandomStream, StreamId};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Circuit index reserved for generator streams, so they never collide with noise streams.
const GENERATOR_DOMAIN: u64 = u64::MAX - 1;

fn generator_stream(seed: u64, family: u32) -> RandomStream {
    RandomStream::new(StreamId::new(seed, GENERATOR_DOMAIN, 0, family))
}

/// Appends single-qubit words in parallel, one moment per word position.
fn push_parallel(circuit: &mut Circuit, words: &[Vec<Gate>]) -> Result<()> {
    let len = words.iter().map(Vec::len).max().unwrap_or(0);
    for k in 0..len {
        let gates = words.iter().filter_map(|w| w.get(k).cloned()).collect();
        circuit.push_moment(Moment::new(gates)?)?;
    }
    Ok(())
}

fn c1_word(q: usize, index: usize) -> Vec<Gate> {
    C1::get().word(index).iter().map(|&k| Gate::named(k, &[q]).unwrap()).collect()
}

fn push_c2(circuit: &mut Circuit, index: usize) -> Result<()> {
    for op in C2::get().word(index) {
        circuit.push_gate(op.gate())?;
    }
    Ok(())
}

/// Randomized benchmarking: `clifford_depth` random Cliffords and their inverse.
pub fn rb_circuit(n_qubits: usize, clifford_depth: usize, seed: u64) -> Result<Circuit> {
    let mut rng = generator_stream(seed, 1);
    let mut circuit = Circuit::new(n_qubits);
    match n_qubits {
        1 => {
            let g = C1::get();
            let mut total = CMatrix::identity(2, 2);
            for _ in 0..clifford_depth {
                let i = rng.index(g.len());
                push_parallel(&mut circuit, &[c1_word(0, i)])?;
                total = g.matrix(i) * total;
            }
            let inv = g.find(&total.adjoint()).expect("group is closed");
            push_parallel(&mut circuit, &[c1_word(0, inv)])?;
        }
        2 => {
            let g = C2::get();
            let mut total = CMatrix::identity(4, 4);
            for _ in 0..clifford_depth {
                let i = rng.index(g.len());
                push_c2(&mut circuit, i)?;
                total = g.matrix(i) * total;
            }
            let inv = g.find(&total.adjoint()).expect("group is closed");
            push_c2(&mut circuit, inv)?;
        }
        n => return Err(Error::InvalidArgument(format!("randomized benchmarking supports 1 or 2 qubits, got {n}"))),
    }
    if circuit.depth() == 0 {
        // The inverse of an empty sequence is the identity; keep one slot of exposure.
        circuit.push_moment(Moment::new((0..n_qubits).map(Gate::i).collect())?)?;
    }
    Ok(circuit)
}

/// Mirror circuit and the bitstring it returns without noise.
///
/// `depth` layers of random single-qubit Cliffords each followed by a CNOT
/// (two qubits only), a random Pauli layer, then the inverse layers in
/// reverse order.
pub fn mirror_circuit(n_qubits: usize, depth: usize, seed: u64) -> Result<(Circuit, Vec<u8>)> {
    if !(1..=2).contains(&n_qubits) {
        return Err(Error::InvalidArgument(format!("mirror circuits support 1 or 2 qubits, got {n_qubits}")));
    }
    let mut rng = generator_stream(seed, 2);
    let mut first = Circuit::new(n_qubits);
    for _ in 0..depth {
        let words: Vec<Vec<Gate>> = (0..n_qubits).map(|q| c1_word(q, rng.index(24))).collect();
        push_parallel(&mut first, &words)?;
        if n_qubits == 2 {
            let control = rng.index(2);
            first.push_moment(Moment::new(vec![Gate::cnot(control, 1 - control)])?)?;
        }
    }
    let paulis = [GateKind::I, GateKind::X, GateKind::Y, GateKind::Z];
    let layer: Vec<Gate> = (0..n_qubits).map(|q| Gate::named(paulis[rng.index(4)], &[q]).unwrap()).collect();
    let mut circuit = first.clone();
    circuit.push_moment(Moment::new(layer)?)?;
    let circuit = circuit.concat(&first.inverse())?;

    let mut state = StateVector::zero(n_qubits)?;
    state.apply_circuit(&circuit)?;
    let (best, _) = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let bits = (0..n_qubits).map(|q| ((best >> (n_qubits - 1 - q)) & 1) as u8).collect();
    Ok((circuit, bits))
}

/// Two-qubit, two-round QAOA circuit `U` followed by `U†`.
///
/// `U` alternates `exp(-iγ_k Z⊗Z)` and `exp(-iβ_k (X⊗I + I⊗X))`.
pub fn qaoa_circuit(betas: &[f64], gammas: &[f64]) -> Result<Circuit> {
    if betas.len() != 2 || gammas.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "QAOA needs two β and two γ angles, got {} and {}",
            betas.len(),
            gammas.len()
        )));
    }
    let mut u = Circuit::new(2);
    for (beta, gamma) in betas.iter().zip(gammas) {
        u.push_moment(Moment::new(vec![Gate::rzz(0, 1, 2.0 * gamma)])?)?;
        u.push_moment(Moment::new(vec![Gate::rx(0, 2.0 * beta), Gate::rx(1, 2.0 * beta)])?)?;
    }
    u.concat(&u.inverse())
}

/// Seeded QAOA instance with angles uniform in `[0, π)`.
pub fn random_qaoa_circuit(seed: u64) -> Result<Circuit> {
    let mut rng = generator_stream(seed, 3);
    let betas = [rng.uniform() * PI, rng.uniform() * PI];
    let gammas = [rng.uniform() * PI, rng.uniform() * PI];
    qaoa_circuit(&betas, &gammas)
}

/// `delay, X, 2·delay, X, …, X, delay` on one qubit.
pub fn cpmg_circuit(delay_slots: usize, n_pulses: usize) -> Result<Circuit> {
    if delay_slots == 0 || n_pulses == 0 {
        return Err(Error::InvalidArgument("CPMG needs delay_slots ≥ 1 and n_pulses ≥ 1".into()));
    }
    let mut c = Circuit::new(1);
    c.push_delay(delay_slots);
    for k in 0..n_pulses {
        c.push_gate(Gate::x(0))?;
        c.push_delay(if k + 1 == n_pulses { delay_slots } else { 2 * delay_slots });
    }
    Ok(c)
}

/// How a single-qubit coherence experiment is prepared and read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// Closing Hadamard and a shot of the `|0⟩` projector.
    Ground,
    /// Exact expectation of `|+⟩⟨+|`.
    Plus,
    /// Exact expectation of `σ^x`.
    SigmaX,
}

impl Readout {
    pub fn observable(self) -> Observable {
        match self {
            Readout::Ground => Observable::ground(1).unwrap(),
            Readout::Plus => Observable::general(CMatrix::from_element(2, 2, c(0.5, 0.0))).unwrap(),
            Readout::SigmaX => Observable::pauli("X").unwrap(),
        }
    }
}

/// Hadamard, then idle slots, so the `|+⟩` state is exposed for `slots` noise slots.
pub fn free_induction(slots: usize, readout: Readout) -> Result<Circuit> {
    if slots == 0 {
        return Err(Error::InvalidArgument("free induction needs at least one slot".into()));
    }
    let mut c = Circuit::new(1);
    c.push_gate(Gate::h(0))?;
    c.push_delay(slots - 1);
    if readout == Readout::Ground {
        c.push_moment(Moment::new(vec![Gate::h(0)])?)?;
    }
    Ok(c)
}

/// Hadamard preparation followed by a CPMG sequence.
pub fn prepared_cpmg(delay_slots: usize, n_pulses: usize) -> Result<Circuit> {
    let mut c = Circuit::new(1);
    c.push_gate(Gate::h(0))?;
    c.concat(&cpmg_circuit(delay_slots, n_pulses)?)
}

/// Circuit family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Rb {
        #[serde(default = "two")]
        n_qubits: usize,
        #[serde(default = "two")]
        clifford_depth: usize,
    },
    Mirror {
        #[serde(default = "two")]
        n_qubits: usize,
        #[serde(default = "four")]
        depth: usize,
    },
    Qaoa {
        #[serde(default)]
        betas: Option<[f64; 2]>,
        #[serde(default)]
        gammas: Option<[f64; 2]>,
    },
    Cpmg {
        #[serde(default = "two")]
        delay_slots: usize,
        #[serde(default = "two")]
        n_pulses: usize,
        #[serde(default = "sigma_x")]
        readout: Readout,
    },
    FreeInduction {
        slots: usize,
        #[serde(default = "ground")]
        readout: Readout,
    },
}

fn two() -> usize {
    2
}
fn four() -> usize {
    4
}
fn sigma_x() -> Readout {
    Readout::SigmaX
}
fn ground() -> Readout {
    Readout::Ground
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Rb { .. } => "rb",
            Family::Mirror { .. } => "mirror",
            Family::Qaoa { .. } => "qaoa",
            Family::Cpmg { .. } => "cpmg",
            Family::FreeInduction { .. } => "free_induction",
        }
    }
}

/// A family plus the seed that fixes one member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

/// A concrete circuit and the observable measured at its end.
#[derive(Debug, Clone)]
pub struct Instance {
    pub circuit: Circuit,
    pub observable: Observable,
}

impl Instance {
    /// Expectation value in the absence of noise.
    pub fn noiseless_value(&self) -> Result<f64> {
        let mut s = StateVector::zero(self.circuit.n_qubits())?;
        s.apply_circuit(&self.circuit)?;
        s.expectation(&self.observable)
    }
}

impl CircuitSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }

    /// The same family with consecutive seeds `seed, seed+1, …`.
    pub fn batch(family: Family, first_seed: u64, count: usize) -> Vec<CircuitSpec> {
        (0..count as u64).map(|k| CircuitSpec::new(family.clone(), first_seed + k)).collect()
    }

    pub fn build(&self) -> Result<Instance> {
        match &self.family {
            Family::Rb { n_qubits, clifford_depth } => Ok(Instance {
                circuit: rb_circuit(*n_qubits, *clifford_depth, self.seed)?,
                observable: Observable::ground(*n_qubits)?,
            }),
            Family::Mirror { n_qubits, depth } => {
                let (circuit, bits) = mirror_circuit(*n_qubits, *depth, self.seed)?;
                Ok(Instance { circuit, observable: Observable::projector(&bits)? })
            }
            Family::Qaoa { betas, gammas } => {
                let circuit = match (betas, gammas) {
                    (Some(b), Some(g)) => qaoa_circuit(b, g)?,
                    _ => random_qaoa_circuit(self.seed)?,
                };
                Ok(Instance { circuit, observable: Observable::ground(2)? })
            }
            Family::Cpmg { delay_slots, n_pulses, readout } => {
                let mut circuit = prepared_cpmg(*delay_slots, *n_pulses)?;
                if *readout == Readout::Ground {
                    circuit.push_moment(Moment::new(vec![Gate::h(0)])?)?;
                }
                Ok(Instance { circuit, observable: readout.observable() })
            }
            Family::FreeInduction { slots, readout } => {
                Ok(Instance { circuit: free_induction(*slots, *readout)?, observable: readout.observable() })
            }
        }
    }
}

/// Noiseless unitary is the identity up to phase.
pub fn is_identity(circuit: &Circuit) -> Result<bool> {
    let u = unitary_of(circuit)?;
    let n = u.nrows();
    Ok(crate::quantum::phase_distance(&u, &CMatrix::identity(n, n)) < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::phase_distance;

    #[test]
    fn rb_is_identity() {
        for n in 1..=2 {
            assert!(is_identity(&rb_circuit(n, 0, 1).unwrap()).unwrap());
            for seed in 0..50 {
                let c = rb_circuit(n, 3, seed).unwrap();
                assert!(is_identity(&c).unwrap());
                let inst = CircuitSpec::new(Family::Rb { n_qubits: n, clifford_depth: 3 }, seed).build().unwrap();
                assert!((inst.noiseless_value().unwrap() - 1.0).abs() < 1e-9);
            }
        }
        assert!(rb_circuit(3, 1, 0).is_err());
    }

    #[test]
    fn rb_gate_counts_match_reference_circuits() {
        let (mut s, mut t, mut d) = (0, 0, 0);
        for seed in 0..50 {
            let c = rb_circuit(2, 2, seed).unwrap();
            let (a, b) = c.gate_counts();
            s += a;
            t += b;
            d += c.depth();
        }
        let (s, t) = (s as f64 / 50.0, t as f64 / 50.0);
        assert!((s / 27.0 - 1.0).abs() < 0.3, "single {s}");
        assert!((t / 5.0 - 1.0).abs() < 0.3, "two {t}");
        let depth = d as f64 / 50.0;
        assert!((10.0..25.0).contains(&depth), "depth {depth}");
    }

    #[test]
    fn rb_is_seed_deterministic() {
        assert_eq!(rb_circuit(2, 2, 9).unwrap(), rb_circuit(2, 2, 9).unwrap());
        assert_ne!(rb_circuit(2, 2, 9).unwrap(), rb_circuit(2, 2, 10).unwrap());
    }

    #[test]
    fn mirror_returns_its_bitstring() {
        for n in 1..=2 {
            for seed in 0..50 {
                let (c, bits) = mirror_circuit(n, 4, seed).unwrap();
                let mut s = StateVector::zero(n).unwrap();
                s.apply_circuit(&c).unwrap();
                let p = s.expectation(&Observable::projector(&bits).unwrap()).unwrap();
                assert!((p - 1.0).abs() < 1e-9);
            }
        }
        let (c, bits) = mirror_circuit(2, 0, 3).unwrap();
        assert_eq!(c.depth(), 1);
        let mut expect = vec![0u8; 2];
        for g in c.moments()[0].gates() {
            if matches!(g.kind(), GateKind::X | GateKind::Y) {
                expect[g.targets()[0]] = 1;
            }
        }
        assert_eq!(bits, expect);
    }

    #[test]
    fn mirror_gate_counts_match_reference_circuits() {
        let (mut s, mut t) = (0, 0);
        for seed in 0..50 {
            let (a, b) = mirror_circuit(2, 4, seed).unwrap().0.gate_counts();
            s += a;
            t += b;
        }
        let (s, t) = (s as f64 / 50.0, t as f64 / 50.0);
        assert!((s / 26.0 - 1.0).abs() < 0.3, "single {s}");
        assert!((t / 8.0 - 1.0).abs() < 0.3, "two {t}");
    }

    #[test]
    fn qaoa_echo() {
        let c = qaoa_circuit(&[0.3, 0.7], &[0.5, 0.2]).unwrap();
        assert_eq!(c.gate_counts(), (8, 4));
        assert!(is_identity(&c).unwrap());
        let zero = qaoa_circuit(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        let u = unitary_of(&zero).unwrap();
        assert!(phase_distance(&u, &CMatrix::identity(4, 4)) < 1e-15);
        assert!(qaoa_circuit(&[0.1], &[0.2, 0.3]).is_err());
        for seed in 0..20 {
            assert!(is_identity(&random_qaoa_circuit(seed).unwrap()).unwrap());
        }
    }

    #[test]
    fn cpmg_structure() {
        let c = cpmg_circuit(2, 2).unwrap();
        assert_eq!(c.depth(), 10);
        assert!(is_identity(&c).unwrap());
        let one = cpmg_circuit(3, 1).unwrap();
        let u = unitary_of(&one).unwrap();
        assert!(phase_distance(&u, Gate::x(0).matrix()) < 1e-15);
        assert!(cpmg_circuit(0, 1).is_err());
    }

    #[test]
    fn coherence_circuits_have_expected_outcomes() {
        for readout in [Readout::Ground, Readout::Plus, Readout::SigmaX] {
            let inst = CircuitSpec::new(Family::FreeInduction { slots: 5, readout }, 0).build().unwrap();
            assert!((inst.noiseless_value().unwrap() - 1.0).abs() < 1e-12);
            let cp = CircuitSpec::new(Family::Cpmg { delay_slots: 2, n_pulses: 2, readout }, 0).build().unwrap();
            assert!((cp.noiseless_value().unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(free_induction(20, Readout::Plus).unwrap().depth(), 20);
    }

    #[test]
    fn spec_round_trips_through_toml() {
        let spec: CircuitSpec = toml::from_str("family = \"rb\"\nn_qubits = 1\nclifford_depth = 10\nseed = 4\n").unwrap();
        assert_eq!(spec.family, Family::Rb { n_qubits: 1, clifford_depth: 10 });
        let text = toml::to_string(&spec).unwrap();
        assert_eq!(toml::from_str::<CircuitSpec>(&text).unwrap(), spec);
    }
}
