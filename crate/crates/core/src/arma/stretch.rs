use super::{ArmaModel, NoiseGenerator, SpectralDensity};
use crate::error::{Error, Result};
use crate::rng::StreamId;
use rustfft::{num_complex::Complex, FftPlanner};
use std::f64::consts::PI;

/// Default FIR length for stretched spectra.
pub const DEFAULT_TAPS: usize = 1024;

/// The exact stretched target `λ S(ω/λ)`.
#[derive(Debug, Clone)]
pub struct StretchedSpectrum {
    pub model: ArmaModel,
    pub lambda: f64,
}

impl SpectralDensity for StretchedSpectrum {
    fn density(&self, omega: f64) -> f64 {
        self.lambda * self.model.spectrum(omega / self.lambda)
    }
}

fn check(lambda: f64, n_taps: usize) -> Result<()> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::InvalidScaleFactor {
            lambda,
            reason: "pulse stretching requires a finite factor of at least 1".into(),
        });
    }
    if n_taps < 64 || !n_taps.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n_taps must be even and at least 64, got {n_taps}")));
    }
    Ok(())
}

/// Moving-average model whose response approximates `λ S(ω/λ)`.
///
/// Frequency-sampling design: the amplitude `√(λ S(ω/λ))` is sampled on a
/// grid of `4·n_taps` points, inverted to a zero-phase impulse response, and
/// the central `n_taps` samples are kept under a Hann window.
pub fn stretch_model(model: &ArmaModel, lambda: f64, n_taps: usize) -> Result<ArmaModel> {
    check(lambda, n_taps)?;
    if model.is_zero() {
        return Ok(ArmaModel::zero());
    }
    let target = StretchedSpectrum { model: model.clone(), lambda };
    let grid = 4 * n_taps;
    let mut buf: Vec<Complex<f64>> = (0..grid)
        .map(|k| {
            let mut w = 2.0 * PI * k as f64 / grid as f64;
            if w > PI {
                w -= 2.0 * PI;
            }
            Complex::new(target.density(w).max(0.0).sqrt(), 0.0)
        })
        .collect();
    FftPlanner::<f64>::new().plan_fft_inverse(grid).process(&mut buf);

    let half = n_taps as isize / 2;
    let taps: Vec<f64> = (0..n_taps)
        .map(|j| {
            let m = j as isize - half;
            let idx = m.rem_euclid(grid as isize) as usize;
            let window = 0.5 * (1.0 + (2.0 * PI * m as f64 / n_taps as f64).cos());
            window * buf[idx].re / grid as f64
        })
        .collect();
    // Leading zeros only delay the process and trailing zeros add nothing.
    let peak = taps.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let keep = |t: &f64| t.abs() > 1e-13 * peak;
    let first = taps.iter().position(keep).unwrap_or(0);
    let last = taps.iter().rposition(keep).unwrap_or(0);
    ArmaModel::new(Vec::new(), taps[first..=last].to_vec())
}

/// Seeded generator for the stretched process.
pub fn stretch_spectrum(model: &ArmaModel, lambda: f64, n_taps: usize, id: StreamId) -> Result<NoiseGenerator> {
    Ok(NoiseGenerator::new(&stretch_model(model, lambda, n_taps)?, id))
}
