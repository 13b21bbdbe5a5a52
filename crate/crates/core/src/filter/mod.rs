//! Filter functions of circuits under dephasing noise.
//!
//! Gates are instantaneous. Slot `j` of a circuit spans `[t_{j−1}, t_j)` and
//! carries the noise injected after moment `j`, so its switching function is
//! computed with the reverse propagator of moments `j+1..d`. With unit slots
//! this is the discrete-time picture the Monte-Carlo simulator samples.

mod analytic;
mod cumulant;

pub use analytic::{
    analytic_global_fold_ff, analytic_local_fold_ff, comb_factor, global_fold_components, local_fold_components,
    normalized_max_ff, LocalFoldComponents, NormalizedCurve,
};
pub use cumulant::{predict_dephased, second_cumulant, ChiPrediction, CumulantResult};

use crate::arma::SpectralDensity;
use crate::error::{Error, Result};
use crate::quantum::{c, CMatrix, Circuit, PauliBasis};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Largest register handled by the filter-function routines.
pub const MAX_FILTER_QUBITS: usize = 3;

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// `n` points on `[−π, π]`.
pub fn nyquist_grid(n: usize) -> Vec<f64> {
    uniform_grid(-PI, PI, n)
}

/// `(1/N) Tr[U A_α U† A_β]` for every `α, β` of the basis, row-major.
pub(crate) fn toggle_matrix(u: &CMatrix, basis: &PauliBasis) -> Vec<f64> {
    let ops = basis.ops();
    let n = ops.len();
    let dim = u.nrows() as f64;
    let ud = u.adjoint();
    let mut out = vec![0.0; n * n];
    for (a, op_a) in ops.iter().enumerate() {
        let conj = u * op_a * &ud;
        for (b, op_b) in ops.iter().enumerate() {
            // Tr[C B] = Σ_ik C_ik B_ki
            let mut tr = c(0.0, 0.0);
            for i in 0..conj.nrows() {
                for k in 0..conj.ncols() {
                    tr += conj[(i, k)] * op_b[(k, i)];
                }
            }
            out[a * n + b] = tr.re / dim;
        }
    }
    out
}

/// Products `R_s = M_d ⋯ M_{s+1}` for `s = 0..=d` (`R_d = I`, `R_0 = U`).
pub(crate) fn suffix_products(circuit: &Circuit) -> Result<Vec<CMatrix>> {
    let d = circuit.depth();
    let dim = 1usize << circuit.n_qubits();
    let mut out = vec![CMatrix::identity(dim, dim); d + 1];
    for s in (0..d).rev() {
        let m = moment_unitary(circuit, s)?;
        out[s] = &out[s + 1] * m;
    }
    Ok(out)
}

pub(crate) fn moment_unitary(circuit: &Circuit, index: usize) -> Result<CMatrix> {
    let single = Circuit::from_moments(circuit.n_qubits(), vec![circuit.moments()[index].clone()])?;
    crate::quantum::unitary_of(&single)
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_FILTER_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    Ok(())
}

/// Piecewise-constant switching functions `f_{αβ}(t)` over the Pauli basis.
#[derive(Debug, Clone)]
pub struct SwitchingFunctionSet {
    basis: PauliBasis,
    bounds: Vec<f64>,
    /// `values[(α·L + β)·slots + j]`
    values: Vec<f64>,
}

impl SwitchingFunctionSet {
    /// Builds a set from explicit slot boundaries and per-slot toggle matrices.
    pub(crate) fn from_toggles(basis: PauliBasis, bounds: Vec<f64>, toggles: &[Vec<f64>]) -> Self {
        let l = basis.len();
        let slots = toggles.len();
        let mut values = vec![0.0; l * l * slots];
        for (j, t) in toggles.iter().enumerate() {
            for p in 0..l * l {
                values[p * slots + j] = t[p];
            }
        }
        Self { basis, bounds, values }
    }

    pub fn basis(&self) -> &PauliBasis {
        &self.basis
    }

    pub fn slots(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Total duration `T`.
    pub fn duration(&self) -> f64 {
        *self.bounds.last().unwrap()
    }

    /// Slot boundaries `t_0 = 0 < t_1 < … < t_d = T`.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    fn pair(&self, alpha: usize, beta: usize) -> Result<usize> {
        let l = self.basis.len();
        if alpha >= l || beta >= l {
            return Err(Error::MissingIndex(alpha, beta));
        }
        Ok(alpha * l + beta)
    }

    /// Per-slot values of `f_{αβ}`.
    pub fn values(&self, alpha: usize, beta: usize) -> Result<&[f64]> {
        let p = self.pair(alpha, beta)?;
        let s = self.slots();
        Ok(&self.values[p * s..(p + 1) * s])
    }

    /// `(t_start, t_end, value)` segments of `f_{αβ}`.
    pub fn segments(&self, alpha: usize, beta: usize) -> Result<Vec<(f64, f64, f64)>> {
        let v = self.values(alpha, beta)?;
        Ok(self.bounds.windows(2).zip(v).map(|(w, &x)| (w[0], w[1], x)).collect())
    }

    /// Same switching values with every slot lasting `factor` times longer.
    pub fn stretched(&self, factor: f64) -> Self {
        Self { basis: self.basis.clone(), bounds: self.bounds.iter().map(|t| t * factor).collect(), values: self.values.clone() }
    }
}

/// Switching functions of a circuit with unit-length slots.
pub fn switching_functions(circuit: &Circuit, basis: &PauliBasis) -> Result<SwitchingFunctionSet> {
    check_qubits(circuit.n_qubits())?;
    if basis.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), actual: basis.n_qubits() });
    }
    let d = circuit.depth();
    let suffix = suffix_products(circuit)?;
    let toggles: Vec<Vec<f64>> = (1..=d).map(|j| toggle_matrix(&suffix[j], basis)).collect();
    let bounds = (0..=d).map(|j| j as f64).collect();
    Ok(SwitchingFunctionSet::from_toggles(basis.clone(), bounds, &toggles))
}

/// `∫_{t0}^{t1} e^{iωt} dt`, exact.
pub fn segment_integral(omega: f64, t0: f64, t1: f64) -> C64 {
    if omega == 0.0 {
        return c(t1 - t0, 0.0);
    }
    (C64::from_polar(1.0, omega * t1) - C64::from_polar(1.0, omega * t0)) / c(0.0, omega)
}

/// Fourier transforms `F_{αβ}(ω)` on a frequency grid.
#[derive(Debug, Clone)]
pub struct FilterFunctionSet {
    omegas: Vec<f64>,
    n_basis: usize,
    /// `f[(α·L + β)·n_ω + k]`
    f: Vec<C64>,
}

impl FilterFunctionSet {
    pub(crate) fn from_parts(omegas: Vec<f64>, n_basis: usize, f: Vec<C64>) -> Self {
        debug_assert_eq!(f.len(), n_basis * n_basis * omegas.len());
        Self { omegas, n_basis, f }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn basis_len(&self) -> usize {
        self.n_basis
    }

    /// `F_{αβ}` on the grid.
    pub fn transform(&self, alpha: usize, beta: usize) -> Result<&[C64]> {
        if alpha >= self.n_basis || beta >= self.n_basis {
            return Err(Error::MissingIndex(alpha, beta));
        }
        let n = self.omegas.len();
        let p = alpha * self.n_basis + beta;
        Ok(&self.f[p * n..(p + 1) * n])
    }
}

/// Exact Fourier transforms of every switching function.
pub fn fourier_switching(sf: &SwitchingFunctionSet, omegas: &[f64]) -> Result<FilterFunctionSet> {
    if let Some(w) = omegas.iter().find(|w| !(w.abs() <= PI + 1e-12)) {
        return Err(Error::InvalidArgument(format!("frequency {w} outside [-π, π]")));
    }
    let slots = sf.slots();
    let n_w = omegas.len();
    // seg[k·slots + j] = ∫ over slot j of e^{iω_k t}
    let mut seg = Vec::with_capacity(n_w * slots);
    for &w in omegas {
        for b in sf.bounds.windows(2) {
            seg.push(segment_integral(w, b[0], b[1]));
        }
    }
    let l = sf.basis.len();
    let mut f = vec![c(0.0, 0.0); l * l * n_w];
    for p in 0..l * l {
        let vals = &sf.values[p * slots..(p + 1) * slots];
        if vals.iter().all(|&v| v == 0.0) {
            continue;
        }
        for k in 0..n_w {
            let row = &seg[k * slots..(k + 1) * slots];
            f[p * n_w + k] = row.iter().zip(vals).map(|(s, &v)| s * v).sum();
        }
    }
    Ok(FilterFunctionSet::from_parts(omegas.to_vec(), l, f))
}

/// `ℱ_{αβ,α'β'}(ω) = Re[F_{αβ}(ω) F_{α'β'}(−ω)]`.
pub fn filter_function(ffs: &FilterFunctionSet, first: (usize, usize), second: (usize, usize)) -> Result<Vec<f64>> {
    let a = ffs.transform(first.0, first.1)?;
    let b = ffs.transform(second.0, second.1)?;
    // Real switching functions: F(−ω) = conj F(ω).
    Ok(a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).collect())
}

/// `sinc²(ω/2)`: the response of holding a sample for one unit slot.
pub fn hold_response(omega: f64) -> f64 {
    let h = 0.5 * omega;
    if h.abs() < 1e-8 {
        1.0 - h * h / 3.0
    } else {
        (h.sin() / h).powi(2)
    }
}

/// Trapezoid rule for `∫ g(ω) dω/2π` on a uniform or non-uniform grid.
pub fn trapezoid(omegas: &[f64], g: &[f64]) -> f64 {
    omegas.windows(2).zip(g.windows(2)).map(|(w, v)| 0.5 * (w[1] - w[0]) * (v[0] + v[1])).sum::<f64>() / (2.0 * PI)
}

/// Overlap `χ = ∫ dω/2π S(ω) ℱ(ω) / sinc²(ω/2)` over the grid.
///
/// The noise is a sequence of angles, one per unit slot, so its spectrum lives
/// on the Nyquist band. Dividing the continuous-time filter by the hold
/// response makes `χ` the exact variance `Var(Σ_j f_j y_j)` for a grid
/// spanning `[−π, π]`.
pub fn overlap_integral(spectrum: &dyn SpectralDensity, omegas: &[f64], ff: &[f64]) -> Result<f64> {
    if omegas.len() != ff.len() {
        return Err(Error::DimensionMismatch { expected: omegas.len(), actual: ff.len() });
    }
    if omegas.len() < 2 {
        return Err(Error::NotEnoughData("overlap integral needs at least two grid points".into()));
    }
    let g: Vec<f64> = omegas.iter().zip(ff).map(|(&w, &v)| spectrum.density(w) * v / hold_response(w)).collect();
    Ok(trapezoid(omegas, &g))
}

/// `A + B·exp(−χ)`.
pub fn predict_expectation(chi: f64, a: f64, b: f64) -> f64 {
    a + b * (-chi).exp()
}
