use super::{c, CMatrix, Gate, GateKind};
use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Gates that execute in the same unit time slot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Moment {
    gates: Vec<Gate>,
}

impl Moment {
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        let mut m = Self::default();
        for g in gates {
            if !m.accepts(&g) {
                return Err(Error::InvalidArgument(format!(
                    "gate {} on {:?} overlaps another gate in the moment",
                    g.label(),
                    g.targets()
                )));
            }
            m.gates.push(g);
        }
        Ok(m)
    }

    /// A delay slot with no gates.
    pub fn idle() -> Self {
        Self::default()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_idle(&self) -> bool {
        self.gates.iter().all(Gate::is_identity)
    }

    fn accepts(&self, g: &Gate) -> bool {
        self.gates.iter().all(|h| h.targets().iter().all(|t| !g.targets().contains(t)))
    }

    /// The inverse moment.
    pub fn adjoint(&self) -> Self {
        Self { gates: self.gates.iter().map(Gate::adjoint).collect() }
    }
}

/// An ordered list of moments on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    moments: Vec<Moment>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, moments: Vec::new() }
    }

    pub fn from_moments(n_qubits: usize, moments: Vec<Moment>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for m in moments {
            c.push_moment(m)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn moments(&self) -> &[Moment] {
        &self.moments
    }

    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    fn check(&self, g: &Gate) -> Result<()> {
        for &t in g.targets() {
            if t >= self.n_qubits {
                return Err(Error::QubitOutOfRange { index: t, n_qubits: self.n_qubits });
            }
        }
        Ok(())
    }

    pub fn push_moment(&mut self, m: Moment) -> Result<()> {
        for g in m.gates() {
            self.check(g)?;
        }
        self.moments.push(m);
        Ok(())
    }

    /// Places a gate in the earliest trailing moment whose qubits are free,
    /// opening a new moment if none is. Empty (delay) moments are barriers.
    pub fn push_gate(&mut self, g: Gate) -> Result<()> {
        self.check(&g)?;
        pack(&mut self.moments, 0, g);
        Ok(())
    }

    /// Appends `n` idle slots.
    pub fn push_delay(&mut self, n: usize) {
        for _ in 0..n {
            self.moments.push(Moment::idle());
        }
    }

    /// `other` executed after `self`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, actual: other.n_qubits });
        }
        let mut out = self.clone();
        out.moments.extend(other.moments.iter().cloned());
        Ok(out)
    }

    /// Reversed adjoint moments.
    pub fn inverse(&self) -> Circuit {
        Circuit { n_qubits: self.n_qubits, moments: self.moments.iter().rev().map(Moment::adjoint).collect() }
    }

    /// Counts of non-identity single- and two-qubit gates.
    pub fn gate_counts(&self) -> (usize, usize) {
        let mut counts = (0, 0);
        for g in self.moments.iter().flat_map(|m| m.gates()) {
            match (g.is_identity(), g.targets().len()) {
                (true, _) => {}
                (false, 1) => counts.0 += 1,
                _ => counts.1 += 1,
            }
        }
        counts
    }

    /// Serialises to the line-oriented text format.
    ///
    /// ```text
    /// QUBITS 2
    /// GATE H 0
    /// GATE RX 1 0.5
    /// TICK
    /// GATE CNOT 0 1
    /// TICK
    /// ```
    ///
    /// `TICK` closes a moment; consecutive `TICK`s encode idle slots. Generic
    /// unitaries are written as `U1`/`U2` followed by row-major `re im` pairs.
    pub fn to_text(&self) -> String {
        let mut s = format!("QUBITS {}\n", self.n_qubits);
        for m in &self.moments {
            for g in m.gates() {
                let _ = write!(s, "GATE ");
                let kind = g.kind();
                if kind == GateKind::Unitary {
                    let _ = write!(s, "U{}", g.targets().len());
                } else {
                    s.push_str(kind.name());
                }
                for t in g.targets() {
                    let _ = write!(s, " {t}");
                }
                match kind {
                    GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Rzz(t) => {
                        let _ = write!(s, " {t:?}");
                    }
                    GateKind::Unitary => {
                        let mm = g.matrix();
                        for r in 0..mm.nrows() {
                            for col in 0..mm.ncols() {
                                let z = mm[(r, col)];
                                let _ = write!(s, " {:?} {:?}", z.re, z.im);
                            }
                        }
                    }
                    _ => {}
                }
                s.push('\n');
            }
            s.push_str("TICK\n");
        }
        s
    }

    /// Parses the text format. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        // Gates since the last TICK are packed into moments after `barrier`.
        let mut open = false;
        let mut barrier = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let head = tok.next().unwrap().to_ascii_uppercase();
            match head.as_str() {
                "QUBITS" => {
                    if circuit.is_some() {
                        return Err(err("QUBITS given twice".into()));
                    }
                    let n = tok
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| err("QUBITS needs a positive integer".into()))?;
                    if n == 0 {
                        return Err(err("QUBITS needs a positive integer".into()));
                    }
                    circuit = Some(Circuit::new(n));
                }
                "TICK" => {
                    let c = circuit.as_mut().ok_or_else(|| err("TICK before QUBITS".into()))?;
                    if !open {
                        c.moments.push(Moment::idle());
                    }
                    open = false;
                    barrier = c.moments.len();
                }
                "GATE" => {
                    let c = circuit.as_mut().ok_or_else(|| err("GATE before QUBITS".into()))?;
                    let args: Vec<&str> = tok.collect();
                    let g = parse_gate(&args).map_err(&err)?;
                    c.check(&g).map_err(|e| err(e.to_string()))?;
                    pack(&mut c.moments, barrier, g);
                    open = true;
                }
                other => return Err(err(format!("unknown directive '{other}'"))),
            }
        }
        circuit.ok_or(Error::Parse { line: 0, message: "missing QUBITS line".into() })
    }
}

fn pack(moments: &mut Vec<Moment>, floor: usize, g: Gate) {
    let mut slot = moments.len();
    while slot > floor && !moments[slot - 1].gates.is_empty() && moments[slot - 1].accepts(&g) {
        slot -= 1;
    }
    if slot == moments.len() {
        moments.push(Moment { gates: vec![g] });
    } else {
        moments[slot].gates.push(g);
    }
}

fn parse_gate(args: &[&str]) -> std::result::Result<Gate, String> {
    let name = args.first().ok_or("GATE needs a name")?.to_ascii_uppercase();
    let nums = |s: &[&str]| -> std::result::Result<Vec<f64>, String> {
        s.iter().map(|t| t.parse::<f64>().map_err(|_| format!("bad number '{t}'"))).collect()
    };
    let qubits = |s: &[&str]| -> std::result::Result<Vec<usize>, String> {
        s.iter().map(|t| t.parse::<usize>().map_err(|_| format!("bad qubit index '{t}'"))).collect()
    };
    let rest = &args[1..];
    let (kind, arity, n_params) = match name.as_str() {
        "I" | "ID" => (GateKind::I, 1, 0),
        "X" => (GateKind::X, 1, 0),
        "Y" => (GateKind::Y, 1, 0),
        "Z" => (GateKind::Z, 1, 0),
        "H" => (GateKind::H, 1, 0),
        "S" => (GateKind::S, 1, 0),
        "SDG" => (GateKind::Sdg, 1, 0),
        "RX" => (GateKind::Rx(0.0), 1, 1),
        "RY" => (GateKind::Ry(0.0), 1, 1),
        "RZ" => (GateKind::Rz(0.0), 1, 1),
        "CNOT" | "CX" => (GateKind::Cnot, 2, 0),
        "CZ" => (GateKind::Cz, 2, 0),
        "RZZ" => (GateKind::Rzz(0.0), 2, 1),
        "U1" => (GateKind::Unitary, 1, 8),
        "U2" => (GateKind::Unitary, 2, 32),
        other => return Err(format!("unknown gate '{other}'")),
    };
    if rest.len() != arity + n_params {
        return Err(format!("{name} expects {arity} qubit(s) and {n_params} parameter(s)"));
    }
    let targets = qubits(&rest[..arity])?;
    let params = nums(&rest[arity..])?;
    let kind = match kind {
        GateKind::Rx(_) => GateKind::Rx(params[0]),
        GateKind::Ry(_) => GateKind::Ry(params[0]),
        GateKind::Rz(_) => GateKind::Rz(params[0]),
        GateKind::Rzz(_) => GateKind::Rzz(params[0]),
        GateKind::Unitary => {
            let dim = 1 << arity;
            let entries: Vec<_> = params.chunks(2).map(|p| c(p[0], p[1])).collect();
            return Gate::unitary(&targets, CMatrix::from_row_slice(dim, dim, &entries)).map_err(|e| e.to_string());
        }
        k => k,
    };
    Gate::named(kind, &targets).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{phase_distance, unitary_of};

    #[test]
    fn greedy_packing() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::h(0)).unwrap();
        c.push_gate(Gate::x(1)).unwrap();
        c.push_gate(Gate::cnot(0, 1)).unwrap();
        c.push_gate(Gate::z(0)).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.gate_counts(), (3, 1));
        assert!(c.push_gate(Gate::x(2)).is_err());
        assert!(Moment::new(vec![Gate::x(0), Gate::cnot(1, 0)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "QUBITS 2\n# bell pair\nGATE H 0\nGATE RY 1 0.25\nTICK\nTICK\nGATE CNOT 0 1\nGATE RZZ 0 1 -0.5\n";
        let c = Circuit::from_text(text).unwrap();
        assert_eq!(c.depth(), 4);
        assert!(c.moments()[1].is_idle());
        let c2 = Circuit::from_text(&c.to_text()).unwrap();
        assert_eq!(c, c2);

        let mut u = Circuit::new(2);
        u.push_gate(Gate::rx(0, 0.3).adjoint()).unwrap();
        let g = Gate::unitary(&[0, 1], Gate::cnot(0, 1).matrix() * Gate::cz(0, 1).matrix()).unwrap();
        u.push_gate(g).unwrap();
        let u2 = Circuit::from_text(&u.to_text()).unwrap();
        assert!(phase_distance(&unitary_of(&u).unwrap(), &unitary_of(&u2).unwrap()) < 1e-14);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Circuit::from_text("QUBITS 1\nGATE FOO 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Circuit::from_text("QUBITS 1\nGATE X 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Circuit::from_text("GATE X 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(Circuit::from_text("QUBITS 1\nGATE RX 0\n").is_err());
    }

    #[test]
    fn inverse_undoes() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::h(0)).unwrap();
        c.push_gate(Gate::s(1)).unwrap();
        c.push_gate(Gate::cnot(0, 1)).unwrap();
        c.push_gate(Gate::rx(1, 0.4)).unwrap();
        let full = c.concat(&c.inverse()).unwrap();
        let u = unitary_of(&full).unwrap();
        assert!(phase_distance(&u, &CMatrix::identity(4, 4)) < 1e-14);
    }
}
