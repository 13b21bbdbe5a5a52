use super::{c, max_abs, CMatrix, Circuit, Gate, Moment, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use num_complex::Complex64 as C64;

/// Applies a one- or two-qubit gate in place to a `2^n` amplitude vector.
///
/// Qubit 0 is the most significant bit of the basis index.
pub fn apply_gate_slice(amps: &mut [C64], n_qubits: usize, gate: &Gate) {
    let m = gate.matrix();
    match *gate.targets() {
        [q] => {
            let s = 1usize << (n_qubits - 1 - q);
            let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            for i in 0..amps.len() {
                if i & s == 0 {
                    let (x, y) = (amps[i], amps[i | s]);
                    amps[i] = a * x + b * y;
                    amps[i | s] = cc * x + d * y;
                }
            }
        }
        [q0, q1] => {
            let s0 = 1usize << (n_qubits - 1 - q0);
            let s1 = 1usize << (n_qubits - 1 - q1);
            for i in 0..amps.len() {
                if i & (s0 | s1) == 0 {
                    let idx = [i, i | s1, i | s0, i | s0 | s1];
                    let v = idx.map(|k| amps[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        amps[k] = (0..4).map(|col| m[(r, col)] * v[col]).sum();
                    }
                }
            }
        }
        _ => unreachable!("gates have one or two targets"),
    }
}

/// Multiplies each basis amplitude by `Π_j exp(± i y_j)`, the action of
/// `⊗_j exp(i y_j σ^z_j)`.
pub fn apply_dephasing_slice(amps: &mut [C64], n_qubits: usize, angles: &[f64]) {
    let phases: Vec<C64> = angles.iter().map(|&y| C64::from_polar(1.0, y)).collect();
    for (i, a) in amps.iter_mut().enumerate() {
        let mut p = c(1.0, 0.0);
        for (q, ph) in phases.iter().enumerate() {
            if (i >> (n_qubits - 1 - q)) & 1 == 0 {
                p *= ph;
            } else {
                p *= ph.conj();
            }
        }
        *a *= p;
    }
}

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n_qubits];
        amps[0] = c(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() < 2 || amps.len() != 1 << n {
            return Err(Error::InvalidArgument("amplitude count must be a power of two".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let s = Self { n_qubits: n, amps };
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for &t in gate.targets() {
            if t >= self.n_qubits {
                return Err(Error::QubitOutOfRange { index: t, n_qubits: self.n_qubits });
            }
        }
        apply_gate_slice(&mut self.amps, self.n_qubits, gate);
        Ok(())
    }

    pub fn apply_moment(&mut self, moment: &Moment) -> Result<()> {
        for g in moment.gates() {
            if !g.is_identity() {
                self.apply_gate(g)?;
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, actual: circuit.n_qubits() });
        }
        for m in circuit.moments() {
            self.apply_moment(m)?;
        }
        Ok(())
    }

    /// Applies `⊗_j exp(i y_j σ^z_j)`, one angle per qubit.
    pub fn apply_dephasing(&mut self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, actual: angles.len() });
        }
        apply_dephasing_slice(&mut self.amps, self.n_qubits, angles);
        Ok(())
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        let n = self.amps.len();
        if obs.matrix.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: obs.matrix.nrows() });
        }
        if let ObservableKind::Projector(bits) = &obs.kind {
            return Ok(self.amps[bits_to_index(bits)].norm_sqr());
        }
        let mut acc = c(0.0, 0.0);
        for col in 0..n {
            let mut row_sum = c(0.0, 0.0);
            for row in 0..n {
                row_sum += self.amps[row].conj() * obs.matrix[(row, col)];
            }
            acc += row_sum * self.amps[col];
        }
        Ok(acc.re)
    }

    /// One shot of a projector measurement: `true` with probability `⟨O⟩`.
    pub fn sample_outcome(&self, obs: &Observable, rng: &mut RandomStream) -> Result<bool> {
        if !matches!(obs.kind, ObservableKind::Projector(_)) {
            return Err(Error::NotAProjector);
        }
        let p = self.expectation(obs)?;
        Ok(rng.bernoulli(p))
    }
}

fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// What an observable is, beyond its matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    /// `|b⟩⟨b|` for a computational-basis bitstring, qubit 0 first.
    Projector(Vec<u8>),
    /// Tensor product of `I, X, Y, Z`, qubit 0 first.
    PauliString(String),
    General,
}

/// Hermitian observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub matrix: CMatrix,
    pub kind: ObservableKind,
}

impl Observable {
    pub fn projector(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_QUBITS || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!("bad bitstring {bits:?}")));
        }
        let n = 1 << bits.len();
        let mut m = CMatrix::zeros(n, n);
        let k = bits_to_index(bits);
        m[(k, k)] = c(1.0, 0.0);
        Ok(Self { matrix: m, kind: ObservableKind::Projector(bits.to_vec()) })
    }

    /// Projector onto `|0…0⟩`.
    pub fn ground(n_qubits: usize) -> Result<Self> {
        Self::projector(&vec![0; n_qubits])
    }

    pub fn pauli(label: &str) -> Result<Self> {
        let mut m = CMatrix::identity(1, 1);
        for ch in label.chars() {
            m = m.kronecker(&pauli_matrix(ch)?);
        }
        if label.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        Ok(Self { matrix: m, kind: ObservableKind::PauliString(label.to_ascii_uppercase()) })
    }

    pub fn general(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.nrows().is_power_of_two() || matrix.nrows() < 2 {
            return Err(Error::InvalidArgument("observable must be a 2^n square matrix".into()));
        }
        if max_abs(&(&matrix - matrix.adjoint())) > 1e-12 {
            return Err(Error::InvalidArgument("observable is not Hermitian".into()));
        }
        Ok(Self { matrix, kind: ObservableKind::General })
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    /// `Tr[O] / 2^n`, the value reached under complete depolarisation.
    pub fn depolarized_value(&self) -> f64 {
        self.matrix.trace().re / self.matrix.nrows() as f64
    }

    /// `O² = I` within tolerance.
    pub fn is_involutory(&self) -> bool {
        let n = self.matrix.nrows();
        max_abs(&(&self.matrix * &self.matrix - CMatrix::identity(n, n))) < 1e-10
    }
}

fn pauli_matrix(ch: char) -> Result<CMatrix> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let e = match ch.to_ascii_uppercase() {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        'Z' => [o, z, z, -o],
        other => return Err(Error::InvalidArgument(format!("unknown Pauli '{other}'"))),
    };
    Ok(CMatrix::from_row_slice(2, 2, &e))
}

/// Non-identity Pauli strings on `n` qubits, orthonormal under `(1/N) Tr[A B]`.
#[derive(Debug, Clone)]
pub struct PauliBasis {
    n_qubits: usize,
    labels: Vec<String>,
    ops: Vec<CMatrix>,
}

impl PauliBasis {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 4 {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let total = 1usize << (2 * n_qubits);
        let mut labels = Vec::with_capacity(total - 1);
        let mut ops = Vec::with_capacity(total - 1);
        for code in 1..total {
            let label: String = (0..n_qubits)
                .map(|q| ['I', 'X', 'Y', 'Z'][(code >> (2 * (n_qubits - 1 - q))) & 3])
                .collect();
            ops.push(Observable::pauli(&label)?.matrix);
            labels.push(label);
        }
        Ok(Self { n_qubits, labels, ops })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }

    /// Index of `σ^z` acting on qubit `q` alone.
    pub fn z_index(&self, q: usize) -> usize {
        let label: String = (0..self.n_qubits).map(|k| if k == q { 'Z' } else { 'I' }).collect();
        self.index_of(&label).expect("single-qubit Z is in the basis")
    }
}

/// Dense unitary of a circuit: later moments multiply on the left.
pub fn unitary_of(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.n_qubits();
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let dim = 1 << n;
    let mut u = CMatrix::identity(dim, dim);
    for col in u.as_mut_slice().chunks_mut(dim) {
        for m in circuit.moments() {
            for g in m.gates() {
                if !g.is_identity() {
                    apply_gate_slice(col, n, g);
                }
            }
        }
    }
    Ok(u)
}

/// `1 − |Tr(U†V)| / N`: zero iff the unitaries agree up to a global phase.
pub fn phase_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    let n = u.nrows() as f64;
    let tr: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    (1.0 - tr.norm() / n).max(0.0)
}
