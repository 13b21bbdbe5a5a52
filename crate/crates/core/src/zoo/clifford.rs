//! One- and two-qubit Clifford groups compiled to `{X, Y, Rx(±π/2), Ry(±π/2), CZ}`.

use crate::quantum::{c, CMatrix, Gate, GateKind};
use std::collections::{HashMap, VecDeque};
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// One native operation of a two-qubit Clifford word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    One(usize, GateKind),
    Cz,
}

impl Op {
    pub fn gate(self) -> Gate {
        match self {
            Op::One(q, k) => Gate::named(k, &[q]).expect("native single-qubit gate"),
            Op::Cz => Gate::cz(0, 1),
        }
    }
}

/// Hashable fingerprint of a unitary modulo global phase.
pub(crate) fn phase_key(m: &CMatrix) -> Vec<i64> {
    let pivot = m.iter().find(|z| z.norm() > 1e-6).copied().unwrap_or(c(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    m.iter()
        .flat_map(|z| {
            let w = z * phase;
            [(w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64]
        })
        .collect()
}

const NATIVE_1Q: [GateKind; 6] = [
    GateKind::X,
    GateKind::Y,
    GateKind::Rx(FRAC_PI_2),
    GateKind::Rx(-FRAC_PI_2),
    GateKind::Ry(FRAC_PI_2),
    GateKind::Ry(-FRAC_PI_2),
];

/// The 24 single-qubit Cliffords as shortest native words (time order).
pub struct C1 {
    words: Vec<Vec<GateKind>>,
    mats: Vec<CMatrix>,
    index: HashMap<Vec<i64>, usize>,
}

impl C1 {
    fn build() -> Self {
        let mut words = vec![Vec::new()];
        let mut mats = vec![CMatrix::identity(2, 2)];
        let mut index = HashMap::new();
        index.insert(phase_key(&mats[0]), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for k in NATIVE_1Q {
                let m = Gate::named(k, &[0]).unwrap().matrix() * &mats[i];
                let key = phase_key(&m);
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(key) {
                    let mut w = words[i].clone();
                    w.push(k);
                    slot.insert(words.len());
                    words.push(w);
                    mats.push(m);
                    queue.push_back(words.len() - 1);
                }
            }
        }
        Self { words, mats, index }
    }

    pub fn get() -> &'static C1 {
        static CELL: OnceLock<C1> = OnceLock::new();
        CELL.get_or_init(C1::build)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[GateKind] {
        &self.words[i]
    }

    pub fn matrix(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    pub fn find(&self, m: &CMatrix) -> Option<usize> {
        self.index.get(&phase_key(m)).copied()
    }
}

/// The 11520 two-qubit Cliffords, grouped by entangling class.
pub struct C2 {
    words: Vec<Vec<Op>>,
    mats: Vec<CMatrix>,
    index: HashMap<Vec<i64>, usize>,
}

fn word_matrix(word: &[Op]) -> CMatrix {
    let id2 = CMatrix::identity(2, 2);
    let mut u = CMatrix::identity(4, 4);
    for op in word {
        let g = match op {
            Op::One(0, k) => Gate::named(*k, &[0]).unwrap().matrix().kronecker(&id2),
            Op::One(_, k) => id2.kronecker(Gate::named(*k, &[0]).unwrap().matrix()),
            Op::Cz => Gate::cz(0, 1).matrix().clone(),
        };
        u = g * u;
    }
    u
}

/// CNOT onto `target` from the other qubit, as `Ry(-π/2)_t · CZ · Ry(π/2)_t`.
fn cnot_to(target: usize) -> [Op; 3] {
    [Op::One(target, GateKind::Ry(-FRAC_PI_2)), Op::Cz, Op::One(target, GateKind::Ry(FRAC_PI_2))]
}

impl C2 {
    fn build() -> Self {
        let c1 = C1::get();
        let s1: [Vec<GateKind>; 3] = [
            vec![],
            vec![GateKind::Rx(FRAC_PI_2), GateKind::Ry(FRAC_PI_2)],
            vec![GateKind::Ry(-FRAC_PI_2), GateKind::Rx(-FRAC_PI_2)],
        ];
        let local = |a: &[GateKind], b: &[GateKind]| -> Vec<Op> {
            a.iter().map(|&k| Op::One(0, k)).chain(b.iter().map(|&k| Op::One(1, k))).collect()
        };
        let mut entanglers: Vec<Vec<Op>> = vec![Vec::new()];
        for sa in &s1 {
            for sb in &s1 {
                let mut w = cnot_to(1).to_vec();
                w.extend(local(sa, sb));
                entanglers.push(w);
            }
        }
        for sa in &s1 {
            for sb in &s1 {
                let mut w = cnot_to(1).to_vec();
                w.extend(cnot_to(0));
                w.extend(local(sa, sb));
                entanglers.push(w);
            }
        }
        let mut swap = cnot_to(1).to_vec();
        swap.extend(cnot_to(0));
        swap.extend(cnot_to(1));
        entanglers.push(swap);

        let mut words = Vec::with_capacity(11520);
        let mut mats = Vec::with_capacity(11520);
        let mut index = HashMap::with_capacity(11520);
        for tail in &entanglers {
            for a in 0..c1.len() {
                for b in 0..c1.len() {
                    let mut w = local(c1.word(a), c1.word(b));
                    w.extend_from_slice(tail);
                    let m = word_matrix(&w);
                    if index.insert(phase_key(&m), words.len()).is_none() {
                        words.push(w);
                        mats.push(m);
                    }
                }
            }
        }
        Self { words, mats, index }
    }

    pub fn get() -> &'static C2 {
        static CELL: OnceLock<C2> = OnceLock::new();
        CELL.get_or_init(C2::build)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[Op] {
        &self.words[i]
    }

    pub fn matrix(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    pub fn find(&self, m: &CMatrix) -> Option<usize> {
        self.index.get(&phase_key(m)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{phase_distance, unitary_of, Circuit};

    #[test]
    fn c1_has_24_elements_with_short_words() {
        let g = C1::get();
        assert_eq!(g.len(), 24);
        let total: usize = (0..24).map(|i| g.word(i).len()).sum();
        assert!(total <= 24 * 2);
        for i in 0..24 {
            let inv = g.matrix(i).adjoint();
            assert!(g.find(&inv).is_some());
        }
    }

    #[test]
    fn c2_has_11520_distinct_elements_and_is_closed() {
        let g = C2::get();
        assert_eq!(g.len(), 11520);
        for i in (0..g.len()).step_by(97) {
            let m = g.matrix(i);
            assert!(g.find(&m.adjoint()).is_some());
            let prod = g.matrix((i * 7 + 13) % g.len()) * m;
            assert!(g.find(&prod).is_some());
        }
    }

    #[test]
    fn cz_form_of_cnot() {
        for (control, target) in [(0, 1), (1, 0)] {
            let mut circ = Circuit::new(2);
            circ.push_gate(Gate::cnot(control, target)).unwrap();
            let m = word_matrix(&cnot_to(target));
            assert!(phase_distance(&m, &unitary_of(&circ).unwrap()) < 1e-14);
        }
    }
}
