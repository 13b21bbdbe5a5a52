//! Dense state-vector simulation of small qubit registers.
//!
//! Basis index bits are ordered with qubit 0 as the most significant bit.
//! Each moment of a circuit lasts one unit of gate time.

mod circuit;
mod gate;
mod state;

pub use circuit::{Circuit, Moment};
pub use gate::{Gate, GateKind};
pub use state::{
    apply_dephasing_slice, apply_gate_slice, phase_distance, unitary_of, Observable, ObservableKind, PauliBasis,
    StateVector,
};

use num_complex::Complex64 as C64;

pub type CMatrix = nalgebra::DMatrix<C64>;

/// Largest register handled by the dense simulator.
pub const MAX_QUBITS: usize = 10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
