use super::{c, max_abs, CMatrix};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Named gates of the text format; `Unitary` carries an arbitrary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cnot,
    Cz,
    Rzz(f64),
    Unitary,
}

impl GateKind {
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Rzz(_) => Some(2),
            GateKind::Unitary => None,
            _ => Some(1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Rzz(_) => "RZZ",
            GateKind::Unitary => "U",
        }
    }

    fn matrix(self) -> Option<CMatrix> {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let m2 = |a: C64, b: C64, cc: C64, d: C64| CMatrix::from_row_slice(2, 2, &[a, b, cc, d]);
        Some(match self {
            GateKind::I => CMatrix::identity(2, 2),
            GateKind::X => m2(z, o, o, z),
            GateKind::Y => m2(z, c(0.0, -1.0), c(0.0, 1.0), z),
            GateKind::Z => m2(o, z, z, -o),
            GateKind::H => m2(o, o, o, -o) * c(FRAC_1_SQRT_2, 0.0),
            GateKind::S => m2(o, z, z, c(0.0, 1.0)),
            GateKind::Sdg => m2(o, z, z, c(0.0, -1.0)),
            GateKind::Rx(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                m2(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
            }
            GateKind::Ry(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                m2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
            }
            GateKind::Rz(t) => m2(C64::from_polar(1.0, -t / 2.0), z, z, C64::from_polar(1.0, t / 2.0)),
            GateKind::Cnot => {
                let mut m = CMatrix::zeros(4, 4);
                m[(0, 0)] = o;
                m[(1, 1)] = o;
                m[(2, 3)] = o;
                m[(3, 2)] = o;
                m
            }
            GateKind::Cz => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![o, o, o, -o])),
            GateKind::Rzz(t) => {
                let p = C64::from_polar(1.0, -t / 2.0);
                let m = C64::from_polar(1.0, t / 2.0);
                CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![p, m, m, p]))
            }
            GateKind::Unitary => return None,
        })
    }
}

/// A unitary acting on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    matrix: CMatrix,
}

const UNITARITY_TOL: f64 = 1e-10;

impl Gate {
    /// Named gate on the given targets (control first for CNOT).
    pub fn named(kind: GateKind, targets: &[usize]) -> Result<Self> {
        let matrix = kind
            .matrix()
            .ok_or_else(|| Error::InvalidArgument("a generic unitary needs an explicit matrix".into()))?;
        Self::build(kind, targets, matrix)
    }

    /// Arbitrary unitary; the first target is the most significant factor.
    pub fn unitary(targets: &[usize], matrix: CMatrix) -> Result<Self> {
        Self::build(GateKind::Unitary, targets, matrix)
    }

    fn build(kind: GateKind, targets: &[usize], matrix: CMatrix) -> Result<Self> {
        if targets.is_empty() || targets.len() > 2 {
            return Err(Error::InvalidArgument(format!("gates act on 1 or 2 qubits, got {}", targets.len())));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidArgument("two-qubit gate needs distinct targets".into()));
        }
        if let Some(a) = kind.arity() {
            if a != targets.len() {
                return Err(Error::DimensionMismatch { expected: a, actual: targets.len() });
            }
        }
        let dim = 1 << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: matrix.nrows() });
        }
        let err = max_abs(&(matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)));
        if !(err < UNITARITY_TOL) {
            return Err(Error::InvalidArgument(format!("gate matrix is not unitary (residual {err:e})")));
        }
        Ok(Self { kind, targets: targets.to_vec(), matrix })
    }

    pub fn i(q: usize) -> Self {
        Self::named(GateKind::I, &[q]).unwrap()
    }
    pub fn x(q: usize) -> Self {
        Self::named(GateKind::X, &[q]).unwrap()
    }
    pub fn y(q: usize) -> Self {
        Self::named(GateKind::Y, &[q]).unwrap()
    }
    pub fn z(q: usize) -> Self {
        Self::named(GateKind::Z, &[q]).unwrap()
    }
    pub fn h(q: usize) -> Self {
        Self::named(GateKind::H, &[q]).unwrap()
    }
    pub fn s(q: usize) -> Self {
        Self::named(GateKind::S, &[q]).unwrap()
    }
    pub fn rx(q: usize, theta: f64) -> Self {
        Self::named(GateKind::Rx(theta), &[q]).unwrap()
    }
    pub fn ry(q: usize, theta: f64) -> Self {
        Self::named(GateKind::Ry(theta), &[q]).unwrap()
    }
    pub fn rz(q: usize, theta: f64) -> Self {
        Self::named(GateKind::Rz(theta), &[q]).unwrap()
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::named(GateKind::Cnot, &[control, target]).unwrap()
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::named(GateKind::Cz, &[a, b]).unwrap()
    }
    pub fn rzz(a: usize, b: usize, theta: f64) -> Self {
        Self::named(GateKind::Rzz(theta), &[a, b]).unwrap()
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.name()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.kind == GateKind::I
    }

    /// Inverse gate, keeping a named kind where one exists.
    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Rzz(t) => GateKind::Rzz(-t),
            k => k,
        };
        let matrix = match kind {
            GateKind::Unitary => self.matrix.adjoint(),
            k => k.matrix().unwrap(),
        };
        Self { kind, targets: self.targets.clone(), matrix }
    }

    /// Same gate moved to other qubits.
    pub fn retarget(&self, targets: &[usize]) -> Result<Self> {
        Self::build(self.kind, targets, self.matrix.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn named_gates_are_unitary_and_adjoints_invert() {
        let gates = [
            Gate::i(0),
            Gate::x(0),
            Gate::y(0),
            Gate::z(0),
            Gate::h(0),
            Gate::s(0),
            Gate::rx(0, 0.3),
            Gate::ry(0, -1.1),
            Gate::rz(0, 2.0),
            Gate::cnot(0, 1),
            Gate::cz(0, 1),
            Gate::rzz(0, 1, 0.7),
        ];
        for g in gates {
            let d = g.matrix().nrows();
            let p = g.adjoint().matrix() * g.matrix();
            assert!(max_abs(&(p - CMatrix::identity(d, d))) < 1e-14, "{}", g.label());
        }
    }

    #[test]
    fn rotation_conventions() {
        // Rx(π) = -iX and Rz(π) = -iZ.
        let rx = Gate::rx(0, PI);
        assert!((rx.matrix()[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        let rz = Gate::rz(0, PI);
        assert!((rz.matrix()[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((rz.matrix()[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_gates() {
        assert!(Gate::named(GateKind::Cnot, &[0]).is_err());
        assert!(Gate::named(GateKind::Cnot, &[1, 1]).is_err());
        let bad = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(Gate::unitary(&[0], bad).is_err());
        assert!(Gate::named(GateKind::Unitary, &[0]).is_err());
    }
}
