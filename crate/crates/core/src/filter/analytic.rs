//! Closed-form filter functions of folded circuits and scaled frequency responses.

use super::{
    check_qubits, filter_function, fourier_switching, moment_unitary, suffix_products,
    switching_functions, toggle_matrix, FilterFunctionSet, SwitchingFunctionSet,
};
use crate::error::{Error, Result};
use crate::quantum::{c, Circuit, PauliBasis};
use crate::scaling::{ScalingKind, ScalingMethod};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// `sin(M x) / sin(x)`, evaluated as the Chebyshev polynomial `U_{M−1}(cos x)`.
///
/// The recursion has no division, so the removable singularities at
/// `x = kπ` take their limit `M·(−1)^{k(M−1)}` automatically.
pub fn comb_factor(m: usize, x: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let cx = x.cos();
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 1..m {
        let next = 2.0 * cx * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn unit_bounds(n: usize) -> Vec<f64> {
    (0..=n).map(|j| j as f64).collect()
}

/// Transforms `(F₁, F₂)` of one folding period `U, U†` and of the trailing `U`.
///
/// Both are built from the base circuit alone: a slot after moment `s` of the
/// forward copy toggles like base slot `s`, and a slot after the `r`-th moment
/// of the inverse copy toggles like base slot `d − r`.
pub fn global_fold_components(
    circuit: &Circuit,
    basis: &PauliBasis,
    omegas: &[f64],
) -> Result<(FilterFunctionSet, FilterFunctionSet)> {
    check_qubits(circuit.n_qubits())?;
    let d = circuit.depth();
    if d == 0 {
        return Err(Error::InvalidArgument("global folding needs a non-empty circuit".into()));
    }
    let suffix = suffix_products(circuit)?;
    let toggles: Vec<Vec<f64>> = suffix.iter().map(|r| toggle_matrix(r, basis)).collect();
    let period: Vec<Vec<f64>> = (1..=d).map(|s| toggles[s].clone()).chain((1..=d).map(|r| toggles[d - r].clone())).collect();
    let tail: Vec<Vec<f64>> = (1..=d).map(|s| toggles[s].clone()).collect();
    let f1 = SwitchingFunctionSet::from_toggles(basis.clone(), unit_bounds(2 * d), &period);
    let f2 = SwitchingFunctionSet::from_toggles(basis.clone(), unit_bounds(d), &tail);
    Ok((fourier_switching(&f1, omegas)?, fourier_switching(&f2, omegas)?))
}

/// Filter transforms of `U (U†U)^M` assembled from the period components.
///
/// `F(ω) = e^{iω(M−1)T}·sin(MωT)/sin(ωT)·F₁(ω) + e^{2iωMT}·F₂(ω)` with `T` the
/// base depth in slots.
pub fn analytic_global_fold_ff(
    f1: &FilterFunctionSet,
    f2: &FilterFunctionSet,
    m: usize,
    t: f64,
) -> Result<FilterFunctionSet> {
    if f1.omegas() != f2.omegas() || f1.basis_len() != f2.basis_len() {
        return Err(Error::DimensionMismatch { expected: f1.f.len(), actual: f2.f.len() });
    }
    let n_w = f1.omegas().len();
    let weights: Vec<(C64, C64)> = f1
        .omegas()
        .iter()
        .map(|&w| {
            let comb = comb_factor(m, w * t);
            let fold = C64::from_polar(comb, w * (m as f64 - 1.0) * t);
            let tail = C64::from_polar(1.0, 2.0 * w * m as f64 * t);
            (fold, tail)
        })
        .collect();
    let f = f1.f.iter().zip(&f2.f).enumerate().map(|(i, (a, b))| {
        let (p, q) = weights[i % n_w];
        p * a + q * b
    });
    Ok(FilterFunctionSet::from_parts(f1.omegas().to_vec(), f1.basis_len(), f.collect()))
}

/// Per-moment transforms used by the local-folding formula.
#[derive(Debug, Clone)]
pub struct LocalFoldComponents {
    /// `F^{(1,j)}` of the two-slot period `G_j, G_j†`.
    pub period: Vec<FilterFunctionSet>,
    /// `F^{(2,j)}` of the slot after the final `G_j`.
    pub tail: Vec<FilterFunctionSet>,
}

/// Components for local folding of every moment of `circuit`.
///
/// With `S_j` the product of the moments after `j`, the period slots toggle
/// under `S_j` and `S_j G_j`, and the trailing slot under `S_j`.
pub fn local_fold_components(circuit: &Circuit, basis: &PauliBasis, omegas: &[f64]) -> Result<LocalFoldComponents> {
    check_qubits(circuit.n_qubits())?;
    let suffix = suffix_products(circuit)?;
    let mut period = Vec::with_capacity(circuit.depth());
    let mut tail = Vec::with_capacity(circuit.depth());
    for j in 0..circuit.depth() {
        let s = &suffix[j + 1];
        let sg = s * moment_unitary(circuit, j)?;
        let ts = toggle_matrix(s, basis);
        let tsg = toggle_matrix(&sg, basis);
        let p = SwitchingFunctionSet::from_toggles(basis.clone(), unit_bounds(2), &[ts.clone(), tsg]);
        let t = SwitchingFunctionSet::from_toggles(basis.clone(), unit_bounds(1), &[ts]);
        period.push(fourier_switching(&p, omegas)?);
        tail.push(fourier_switching(&t, omegas)?);
    }
    Ok(LocalFoldComponents { period, tail })
}

/// Filter transforms of the locally folded circuit, slot length `τ = 1`.
///
/// Block `j` starts at `(2M+1)(j−1)`; inside it the period transform is
/// combed by `sin(Mω)/sin(ω)` and the trailing slot sits at offset `2M`.
pub fn analytic_local_fold_ff(components: &LocalFoldComponents, m: usize) -> Result<FilterFunctionSet> {
    let first = components
        .period
        .first()
        .ok_or_else(|| Error::InvalidArgument("local folding needs a non-empty circuit".into()))?;
    let omegas = first.omegas().to_vec();
    let n_w = omegas.len();
    let l = first.basis_len();
    let mut f = vec![c(0.0, 0.0); l * l * n_w];
    let mf = m as f64;
    let base: Vec<(C64, C64)> = omegas
        .iter()
        .map(|&w| (C64::from_polar(comb_factor(m, w), w * (mf - 1.0)), C64::from_polar(1.0, 2.0 * w * mf)))
        .collect();
    for (j, (p, t)) in components.period.iter().zip(&components.tail).enumerate() {
        let start = ((2 * m + 1) * j) as f64;
        for (k, &w) in omegas.iter().enumerate() {
            let shift = C64::from_polar(1.0, w * start);
            let (fold, tail) = base[k];
            for pair in 0..l * l {
                let i = pair * n_w + k;
                f[i] += shift * (fold * p.f[i] + tail * t.f[i]);
            }
        }
    }
    Ok(FilterFunctionSet::from_parts(omegas, l, f))
}

/// Peak-normalised diagonal filter function of a scaled circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCurve {
    pub method: ScalingKind,
    pub lambda: f64,
    /// Pauli label of the noise axis `α` and of the component `β`.
    pub axis: String,
    pub component: String,
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
}

impl NormalizedCurve {
    /// Frequency of the maximum.
    pub fn peak(&self) -> f64 {
        let (k, _) = self.values.iter().enumerate().fold((0, f64::MIN), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
        self.omegas[k]
    }

    /// `∫ω ℱ dω / ∫ℱ dω` over the grid.
    pub fn centroid(&self) -> f64 {
        let num: Vec<f64> = self.omegas.iter().zip(&self.values).map(|(w, v)| w * v).collect();
        super::trapezoid(&self.omegas, &num) / super::trapezoid(&self.omegas, &self.values)
    }

    /// Fraction of `∫ℱ dω` carried above `cut`.
    pub fn fraction_above(&self, cut: f64) -> f64 {
        let high: Vec<f64> = self.omegas.iter().zip(&self.values).map(|(&w, &v)| if w > cut { v } else { 0.0 }).collect();
        super::trapezoid(&self.omegas, &high) / super::trapezoid(&self.omegas, &self.values)
    }
}

/// Switching functions of `circuit` as seen by a scaling method.
///
/// Pulse stretching keeps the circuit and lengthens every slot; the digital
/// methods rewrite the circuit; the ideal method leaves the filter unchanged.
pub fn scaled_switching(circuit: &Circuit, basis: &PauliBasis, method: ScalingMethod) -> Result<SwitchingFunctionSet> {
    match method.kind {
        ScalingKind::Ideal => switching_functions(circuit, basis),
        ScalingKind::PulseStretch => Ok(switching_functions(circuit, basis)?.stretched(method.lambda)),
        _ => {
            let scaled = crate::scaling::scale(method, circuit, &crate::arma::ArmaModel::zero())?;
            switching_functions(&scaled.circuit, basis)
        }
    }
}

/// Largest diagonal filter function `ℱ_{αβ,αβ}` (α a dephasing axis) of each
/// scaled circuit, divided by its maximum.
pub fn normalized_max_ff(circuit: &Circuit, method: ScalingKind, lambdas: &[f64], omegas: &[f64]) -> Result<Vec<NormalizedCurve>> {
    check_qubits(circuit.n_qubits())?;
    let basis = PauliBasis::new(circuit.n_qubits())?;
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let sm = ScalingMethod::new(method, lambda)?;
        let ffs = fourier_switching(&scaled_switching(circuit, &basis, sm)?, omegas)?;
        let mut best: Option<(f64, usize, usize, Vec<f64>)> = None;
        for q in 0..circuit.n_qubits() {
            let a = basis.z_index(q);
            for b in 0..basis.len() {
                let ff = filter_function(&ffs, (a, b), (a, b))?;
                let peak = ff.iter().cloned().fold(0.0, f64::max);
                if best.as_ref().is_none_or(|x| peak > x.0) {
                    best = Some((peak, a, b, ff));
                }
            }
        }
        let (peak, a, b, ff) = best.expect("basis is non-empty");
        let values = if peak > 0.0 { ff.iter().map(|v| v / peak).collect() } else { ff };
        out.push(NormalizedCurve {
            method,
            lambda,
            axis: basis.labels()[a].clone(),
            component: basis.labels()[b].clone(),
            omegas: omegas.to_vec(),
            values,
        });
    }
    Ok(out)
}
