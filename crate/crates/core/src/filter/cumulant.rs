//! Weak-noise predictions built from overlap integrals.

use super::{check_qubits, fourier_switching, hold_response, switching_functions, trapezoid};
use crate::arma::SpectralDensity;
use crate::error::{Error, Result};
use crate::quantum::{c, CMatrix, Circuit, Observable, PauliBasis, StateVector};
use nalgebra::{DMatrix, SymmetricEigen};

/// Second cumulant of a noisy observable and the prediction it implies.
#[derive(Debug, Clone)]
pub struct CumulantResult {
    /// The operator `𝒞⁽²⁾_O(T)/2`.
    pub matrix: CMatrix,
    /// `Tr[exp(−𝒞⁽²⁾/2) ρ₀(T) O]`.
    pub prediction: f64,
}

/// Dephasing-channel prediction for an arbitrary observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiPrediction {
    /// Total overlap `Σ_q Σ_β χ_{qβ}`.
    pub chi: f64,
    /// Expectation after complete dephasing along the excited axes.
    pub a: f64,
    /// Noiseless value minus `a`.
    pub b: f64,
    pub value: f64,
}

fn spectrum_for<'a>(spectra: &[&'a dyn SpectralDensity], q: usize) -> Result<&'a dyn SpectralDensity> {
    match spectra.len() {
        1 => Ok(spectra[0]),
        n if q < n => Ok(spectra[q]),
        n => Err(Error::DimensionMismatch { expected: q + 1, actual: n }),
    }
}

/// Per-qubit covariance `χ_q[β, β'] = ∫ dω/2π S_q ℱ_{z_q β, z_q β'} / sinc²(ω/2)`
/// over a grid spanning `[−π, π]`.
pub(crate) fn overlap_covariances(
    circuit: &Circuit,
    basis: &PauliBasis,
    spectra: &[&dyn SpectralDensity],
    omegas: &[f64],
) -> Result<Vec<DMatrix<f64>>> {
    let n = circuit.n_qubits();
    if spectra.len() != 1 && spectra.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: spectra.len() });
    }
    let sf = switching_functions(circuit, basis)?;
    let ffs = fourier_switching(&sf, omegas)?;
    let l = basis.len();
    let mut out = Vec::with_capacity(n);
    for q in 0..n {
        let s = spectrum_for(spectra, q)?;
        let weight: Vec<f64> = omegas.iter().map(|&w| s.density(w) / hold_response(w)).collect();
        let a = basis.z_index(q);
        let rows: Vec<&[num_complex::Complex64]> = (0..l).map(|b| ffs.transform(a, b)).collect::<Result<_>>()?;
        let active: Vec<bool> = (0..l).map(|b| sf.values(a, b).map(|v| v.iter().any(|x| x.abs() > 1e-14))).collect::<Result<_>>()?;
        let mut m = DMatrix::zeros(l, l);
        for b in 0..l {
            for b2 in b..l {
                if !(active[b] && active[b2]) {
                    continue;
                }
                let g: Vec<f64> = rows[b].iter().zip(rows[b2]).zip(&weight).map(|((x, y), w)| (x * y.conj()).re * w).collect();
                let v = trapezoid(omegas, &g);
                m[(b, b2)] = v;
                m[(b2, b)] = v;
            }
        }
        out.push(m);
    }
    Ok(out)
}

fn final_state(circuit: &Circuit) -> Result<CMatrix> {
    let mut psi = StateVector::zero(circuit.n_qubits())?;
    psi.apply_circuit(circuit)?;
    let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
    Ok(&v * v.adjoint())
}

fn hermitian_exp(m: &CMatrix, scale: f64) -> CMatrix {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|x| c((scale * x).exp(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Second cumulant for an involutory observable under dephasing noise.
///
/// `spectra` holds one spectrum per qubit, or a single one shared by all.
/// `omegas` must span `[−π, π]`; the one-sided integral is half of the
/// symmetric one.
pub fn second_cumulant(
    circuit: &Circuit,
    spectra: &[&dyn SpectralDensity],
    observable: &Observable,
    omegas: &[f64],
) -> Result<CumulantResult> {
    check_qubits(circuit.n_qubits())?;
    if observable.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), actual: observable.n_qubits() });
    }
    if !observable.is_involutory() {
        return Err(Error::NonInvertibleObservable);
    }
    let basis = PauliBasis::new(circuit.n_qubits())?;
    let cov = overlap_covariances(circuit, &basis, spectra, omegas)?;
    let o = &observable.matrix;
    let ops = basis.ops();
    let dim = o.nrows();
    let mut total = DMatrix::<f64>::zeros(ops.len(), ops.len());
    for m in &cov {
        total += m;
    }
    let mut cum = CMatrix::zeros(dim, dim);
    for (b, ab) in ops.iter().enumerate() {
        let oab = o * ab;
        for (b2, ab2) in ops.iter().enumerate() {
            let w = 0.5 * total[(b, b2)];
            if w == 0.0 {
                continue;
            }
            let ab_ab2 = ab * ab2;
            // O⁻¹ = O for an involutory observable.
            let a_op = &ab_ab2 - &oab * o * ab2 - ab * o * ab2 * o + o * &ab_ab2 * o;
            cum += a_op * c(w, 0.0);
        }
    }
    let rho = final_state(circuit)?;
    let prediction = (hermitian_exp(&cum, -1.0) * rho * o).trace().re;
    Ok(CumulantResult { matrix: cum, prediction })
}

/// Expectation after Gaussian dephasing with the overlap covariances.
///
/// The final noiseless state is passed through `exp(𝓛)` with
/// `𝓛(ρ) = Σ_q Σ_{ββ'} χ_q[β,β'] (A_β ρ A_β' − ½{A_β' A_β, ρ})`, which reduces
/// to `A + B·exp(−2χ)` when every slot toggles to a single Pauli.
pub fn predict_dephased(
    circuit: &Circuit,
    spectra: &[&dyn SpectralDensity],
    observable: &Observable,
    omegas: &[f64],
) -> Result<ChiPrediction> {
    check_qubits(circuit.n_qubits())?;
    if observable.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), actual: observable.n_qubits() });
    }
    let basis = PauliBasis::new(circuit.n_qubits())?;
    let cov = overlap_covariances(circuit, &basis, spectra, omegas)?;
    let ops = basis.ops();
    let l = ops.len();
    let dim = observable.matrix.nrows();
    let mut total = DMatrix::<f64>::zeros(l, l);
    for m in &cov {
        total += m;
    }
    let chi = total.diagonal().sum();

    // Pauli transfer representation on {I} ∪ basis, normalised by 1/N.
    let mut paulis = vec![CMatrix::identity(dim, dim)];
    paulis.extend(ops.iter().cloned());
    let np = paulis.len();
    let nf = dim as f64;
    let generator = |x: &CMatrix| -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        for b in 0..l {
            for b2 in 0..l {
                let w = total[(b, b2)];
                if w == 0.0 {
                    continue;
                }
                let prod = &ops[b2] * &ops[b];
                let term = &ops[b] * x * &ops[b2] - (&prod * x + x * &prod) * c(0.5, 0.0);
                out += term * c(w, 0.0);
            }
        }
        out
    };
    let mut r = DMatrix::<f64>::zeros(np, np);
    for (k2, pl) in paulis.iter().enumerate() {
        let lp = generator(pl);
        for (k, pk) in paulis.iter().enumerate() {
            r[(k, k2)] = (pk * &lp).trace().re / nf;
        }
    }
    let r = (&r + r.transpose()) * 0.5;
    let rho = final_state(circuit)?;
    let coeff = nalgebra::DVector::from_iterator(np, paulis.iter().map(|p| (p * &rho).trace().re / nf));
    let readout = nalgebra::DVector::from_iterator(np, paulis.iter().map(|p| (&observable.matrix * p).trace().re));

    let eig = SymmetricEigen::new(r);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let proj = eig.eigenvectors.transpose() * &coeff;
    let (mut value, mut a) = (0.0, 0.0);
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        let along = readout.dot(&eig.eigenvectors.column(i)) * proj[i];
        value += along * lam.exp();
        if lam.abs() <= 1e-12 * scale.max(1e-300) {
            a += along;
        }
    }
    let noiseless = readout.dot(&coeff);
    Ok(ChiPrediction { chi, a, b: noiseless - a, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::{preset, ArmaModel, Preset};
    use crate::filter::{nyquist_grid, predict_expectation};
    use crate::monte_carlo::{gaussian_dephasing_oracle, run_noisy, RunConfig};
    use crate::zoo::{free_induction, prepared_cpmg, Readout};

    #[test]
    fn free_induction_matches_oracle() {
        let grid = nyquist_grid(2048);
        let model = preset(Preset::Pink, 1e-3).unwrap();
        let k = 30;
        let want = gaussian_dephasing_oracle(&model, k);
        for readout in [Readout::SigmaX, Readout::Plus] {
            let circ = free_induction(k, readout).unwrap();
            let obs = readout.observable();
            let p = predict_dephased(&circ, &[&model], &obs, &grid).unwrap();
            let expect = p.a + p.b * want;
            assert!((p.value - expect).abs() < 1e-9, "{readout:?} {} {expect}", p.value);
            assert!((predict_expectation(2.0 * p.chi, p.a, p.b) - p.value).abs() < 1e-12);
        }
        let circ = free_induction(k, Readout::SigmaX).unwrap();
        let cum = second_cumulant(&circ, &[&model], &Readout::SigmaX.observable(), &grid).unwrap();
        assert!((cum.prediction - want).abs() < 1e-9);
    }

    #[test]
    fn projector_is_rejected_by_cumulant() {
        let circ = free_induction(4, Readout::Plus).unwrap();
        let w = ArmaModel::white(0.01);
        let err = second_cumulant(&circ, &[&w], &Readout::Plus.observable(), &nyquist_grid(64)).unwrap_err();
        assert_eq!(err, Error::NonInvertibleObservable);
    }

    #[test]
    fn zero_noise_predicts_noiseless_value() {
        let circ = prepared_cpmg(3, 2).unwrap();
        let z = ArmaModel::zero();
        let obs = Readout::SigmaX.observable();
        let grid = nyquist_grid(128);
        let cum = second_cumulant(&circ, &[&z], &obs, &grid).unwrap();
        assert!(cum.matrix.iter().all(|x| x.norm() == 0.0));
        assert!((cum.prediction - 1.0).abs() < 1e-12);
        let p = predict_dephased(&circ, &[&z], &obs, &grid).unwrap();
        assert!((p.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cumulant_tracks_monte_carlo_for_cpmg() {
        let grid = nyquist_grid(2048);
        let model = preset(Preset::Pink, 1e-3).unwrap();
        let circ = prepared_cpmg(4, 4).unwrap();
        let obs = Readout::SigmaX.observable();
        let cum = second_cumulant(&circ, &[&model], &obs, &grid).unwrap();
        let mc = run_noisy(&circ, &model, &obs, &RunConfig::new(10_000, 5)).unwrap();
        assert!((cum.prediction - mc.mean).abs() < 3.0 * mc.stderr.max(1e-4), "{} {:?}", cum.prediction, mc);
    }
}
