use super::SpectralDensity;
use crate::error::{Error, Result};
use rustfft::{num_complex::Complex, FftPlanner};
use std::f64::consts::PI;

/// Two-sided spectral estimate on the non-negative FFT bins.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    omega: Vec<f64>,
    power: Vec<f64>,
    segments: usize,
}

impl SpectrumEstimate {
    /// Bin frequencies `2πk/n_fft` for `k = 0..=n_fft/2`.
    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    pub fn values(&self) -> &[f64] {
        &self.power
    }

    pub fn segments(&self) -> usize {
        self.segments
    }
}

impl SpectralDensity for SpectrumEstimate {
    /// Linear interpolation between bins, using `S(ω) = S(-ω)`.
    fn density(&self, omega: f64) -> f64 {
        let w = omega.abs().min(PI);
        let step = self.omega[1];
        let pos = w / step;
        let i = (pos.floor() as usize).min(self.power.len() - 2);
        let t = pos - i as f64;
        self.power[i] * (1.0 - t) + self.power[i + 1] * t
    }
}

/// Welch estimate: Hann-windowed segments of length `n_fft`, 50% overlap.
///
/// Normalised so that a white sequence of variance `σ²` gives `S ≈ σ²`.
pub fn periodogram(samples: &[f64], n_fft: usize) -> Result<SpectrumEstimate> {
    if n_fft < 4 || !n_fft.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n_fft must be even and at least 4, got {n_fft}")));
    }
    if samples.len() < n_fft {
        return Err(Error::NotEnoughData(format!("{} samples for a segment of {n_fft}", samples.len())));
    }
    let window: Vec<f64> = (0..n_fft).map(|j| 0.5 * (1.0 - (2.0 * PI * j as f64 / n_fft as f64).cos())).collect();
    let norm: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_fft);

    let hop = n_fft / 2;
    let bins = n_fft / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    let mut segments = 0;
    let mut start = 0;
    while start + n_fft <= samples.len() {
        for (b, (x, w)) in buf.iter_mut().zip(samples[start..start + n_fft].iter().zip(&window)) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, x) in acc.iter_mut().zip(&buf) {
            *a += x.norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    let scale = 1.0 / (norm * segments as f64);
    Ok(SpectrumEstimate {
        omega: (0..bins).map(|k| 2.0 * PI * k as f64 / n_fft as f64).collect(),
        power: acc.into_iter().map(|a| a * scale).collect(),
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::{ArmaModel, NoiseGenerator};
    use crate::rng::StreamId;

    fn stream(model: &ArmaModel, n: usize) -> Vec<f64> {
        let mut g = NoiseGenerator::new(model, StreamId::new(42, 0, 0, 0));
        let mut out = vec![0.0; n];
        g.fill(&mut out);
        out
    }

    #[test]
    fn zero_sequence() {
        let est = periodogram(&vec![0.0; 4096], 256).unwrap();
        assert!(est.values().iter().all(|&v| v == 0.0));
        assert_eq!(est.segments(), 31);
    }

    #[test]
    fn too_short() {
        assert!(matches!(periodogram(&[0.0; 10], 16), Err(Error::NotEnoughData(_))));
        assert!(periodogram(&[0.0; 100], 15).is_err());
    }

    #[test]
    fn white_is_flat() {
        let xs = stream(&ArmaModel::white(1.0), 1 << 20);
        let est = periodogram(&xs, 256).unwrap();
        let v = est.values();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 1.0).abs() < 0.02);
        // End bins average half as many independent real degrees of freedom.
        let worst = v[1..v.len() - 1].iter().map(|x| (x / mean - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 0.1, "{worst}");
    }

    #[test]
    fn ar1_peak() {
        let m = ArmaModel::new(vec![0.9], vec![1.0]).unwrap();
        let xs = stream(&m, 1 << 20);
        let est = periodogram(&xs, 1024).unwrap();
        let peak = est.density(0.0);
        assert!((peak / 100.0 - 1.0).abs() < 0.05, "{peak}");
    }
}
