//! ARMA models of time-correlated dephasing noise.
//!
//! A model produces a sequence of rotation angles through the recursion
//!
//! ```text
//! y_k = Σ_{i=1..p} a_i y_{k-i} + Σ_{j=0..q} b_j x_k-j,   x_k ~ N(0, 1)
//! ```
//!
//! and the matching two-sided power spectrum on the Nyquist band
//!
//! ```text
//! S(ω) = |Σ_j b_j e^{-ijω}|² / |1 - Σ_i a_i e^{-iiω}|²,   ω ∈ [-π, π]
//! ```
//!
//! Both use the same sign for the AR coefficients. Spectra are two-sided and
//! normalised so that `∫ S(ω) dω/2π` over the band equals the per-step
//! variance of `y`.

mod generator;
mod periodogram;
mod presets;
mod stretch;

pub use generator::{burn_in_steps, render, NoiseGenerator};
pub use periodogram::{periodogram, SpectrumEstimate};
pub use presets::{preset, ModelRecord, Preset, BROWN_POLE, LOWPASS_CUTOFF, PINK_BAND, PINK_SECTIONS};
pub use stretch::{stretch_model, stretch_spectrum, StretchedSpectrum, DEFAULT_TAPS};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Minimum distance of every AR root from the unit circle.
pub const STABILITY_MARGIN: f64 = 1e-6;

/// Anything that can report a two-sided power spectral density on `[-π, π]`.
pub trait SpectralDensity {
    fn density(&self, omega: f64) -> f64;

    /// `∫ S(ω) dω/2π` over the band by the trapezoid rule on `n` intervals.
    fn integrated_power(&self, n: usize) -> f64 {
        let h = 2.0 * PI / n as f64;
        let mut acc = 0.5 * (self.density(-PI) + self.density(PI));
        for k in 1..n {
            acc += self.density(-PI + k as f64 * h);
        }
        acc * h / (2.0 * PI)
    }
}

impl<F: Fn(f64) -> f64> SpectralDensity for F {
    fn density(&self, omega: f64) -> f64 {
        self(omega)
    }
}

/// Autoregressive moving-average noise model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaModel {
    ar: Vec<f64>,
    ma: Vec<f64>,
}

impl ArmaModel {
    /// Builds a model, rejecting empty MA parts and non-stationary AR parts.
    pub fn new(ar: Vec<f64>, ma: Vec<f64>) -> Result<Self> {
        if ma.is_empty() {
            return Err(Error::InvalidModel("moving-average coefficients must be non-empty".into()));
        }
        if ar.iter().chain(ma.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        let largest = max_root_modulus(&ar);
        if largest >= 1.0 - STABILITY_MARGIN {
            return Err(Error::UnstableModel { modulus: largest });
        }
        Ok(Self { ar, ma })
    }

    /// White noise with per-step standard deviation `sigma`.
    pub fn white(sigma: f64) -> Self {
        Self { ar: Vec::new(), ma: vec![sigma] }
    }

    /// The noiseless model `b = [0]`.
    pub fn zero() -> Self {
        Self::white(0.0)
    }

    pub fn ar(&self) -> &[f64] {
        &self.ar
    }

    pub fn ma(&self) -> &[f64] {
        &self.ma
    }

    /// `(p, q)`: number of AR coefficients and index of the last MA coefficient.
    pub fn order(&self) -> (usize, usize) {
        (self.ar.len(), self.ma.len() - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.ma.iter().all(|&b| b == 0.0)
    }

    /// Two-sided power spectral density at normalised angular frequency `omega`.
    pub fn spectrum(&self, omega: f64) -> f64 {
        let num = poly_at(&self.ma, 0, omega);
        let mut den = C64::new(1.0, 0.0);
        for (i, &a) in self.ar.iter().enumerate() {
            den -= a * C64::from_polar(1.0, -((i + 1) as f64) * omega);
        }
        num.norm_sqr() / den.norm_sqr()
    }

    /// Ideal noise scaling: `b → √λ b`, so the spectrum is multiplied by `λ`.
    pub fn scale_power(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidScaleFactor {
                lambda,
                reason: "invalid scale factor: must be finite and non-negative".into(),
            });
        }
        let s = lambda.sqrt();
        Ok(Self { ar: self.ar.clone(), ma: self.ma.iter().map(|b| b * s).collect() })
    }

    /// Multiplies the MA part so that the process variance becomes `power`.
    pub fn with_power(&self, power: f64) -> Result<Self> {
        let current = self.variance();
        if current <= 0.0 {
            return Err(Error::InvalidModel("cannot rescale a zero-power model".into()));
        }
        self.scale_power(power / current)
    }

    /// Autocovariances `γ(0), …, γ(max_lag)` of the stationary process.
    pub fn autocovariance(&self, max_lag: usize) -> Vec<f64> {
        let p = self.ar.len();
        let q = self.ma.len() - 1;
        let mut gamma = vec![0.0; max_lag + 1];
        if p == 0 {
            for (k, g) in gamma.iter_mut().enumerate() {
                if k <= q {
                    *g = (0..=q - k).map(|j| self.ma[j] * self.ma[j + k]).sum();
                }
            }
            return gamma;
        }

        // MA(∞) weights ψ_0..ψ_q.
        let mut psi = vec![0.0; q + 1];
        for j in 0..=q {
            let mut v = self.ma[j];
            for i in 1..=j.min(p) {
                v += self.ar[i - 1] * psi[j - i];
            }
            psi[j] = v;
        }
        let rhs = |k: usize| -> f64 {
            if k > q {
                0.0
            } else {
                (k..=q).map(|j| self.ma[j] * psi[j - k]).sum()
            }
        };

        // γ(k) - Σ a_i γ(|k-i|) = rhs(k) for k = 0..p determines γ(0..p).
        let mut m = DMatrix::<f64>::zeros(p + 1, p + 1);
        let mut b = DVector::<f64>::zeros(p + 1);
        for k in 0..=p {
            m[(k, k)] += 1.0;
            for i in 1..=p {
                let lag = (k as isize - i as isize).unsigned_abs();
                m[(k, lag)] -= self.ar[i - 1];
            }
            b[k] = rhs(k);
        }
        let sol = m.lu().solve(&b).expect("stationary model has a regular Yule-Walker system");
        let head = (p + 1).min(max_lag + 1);
        gamma[..head].copy_from_slice(&sol.as_slice()[..head]);
        let mut full: Vec<f64> = sol.iter().copied().collect();
        for k in (p + 1)..=max_lag {
            let mut v = rhs(k);
            for i in 1..=p {
                v += self.ar[i - 1] * full[k - i];
            }
            full.push(v);
            gamma[k] = v;
        }
        gamma
    }

    /// Per-step variance `γ(0) = ∫ S dω/2π`.
    pub fn variance(&self) -> f64 {
        self.autocovariance(0)[0]
    }
}

impl SpectralDensity for ArmaModel {
    fn density(&self, omega: f64) -> f64 {
        self.spectrum(omega)
    }
}

/// Spectrum multiplied by a constant, used for ideal scaling in spectral analyses.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSpectrum<'a, S: SpectralDensity + ?Sized> {
    pub base: &'a S,
    pub lambda: f64,
}

impl<S: SpectralDensity + ?Sized> SpectralDensity for ScaledSpectrum<'_, S> {
    fn density(&self, omega: f64) -> f64 {
        self.lambda * self.base.density(omega)
    }
}

fn poly_at(coeffs: &[f64], offset: usize, omega: f64) -> C64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * C64::from_polar(1.0, -((k + offset) as f64) * omega))
        .sum()
}

/// Largest modulus among the roots of `z^p - a_1 z^{p-1} - … - a_p`.
pub(crate) fn max_root_modulus(ar: &[f64]) -> f64 {
    let p = ar.len();
    if p == 0 {
        return 0.0;
    }
    let mut companion = DMatrix::<f64>::zeros(p, p);
    for (i, &a) in ar.iter().enumerate() {
        companion[(0, i)] = a;
    }
    for i in 1..p {
        companion[(i, i - 1)] = 1.0;
    }
    companion
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
