use super::ArmaModel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Half-power frequency of the lowpass preset (radians per gate time).
pub const LOWPASS_CUTOFF: f64 = 0.01 * PI;
/// Band over which the pink preset's pole-zero pairs are log-spaced.
pub const PINK_BAND: (f64, f64) = (0.01 * PI, PI);
/// Number of pole-zero pairs in the pink preset.
pub const PINK_SECTIONS: usize = 3;
/// AR pole of the brown preset.
pub const BROWN_POLE: f64 = 0.97;

/// The four reference spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    White,
    Lowpass,
    Pink,
    Brown,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::White, Preset::Lowpass, Preset::Pink, Preset::Brown];

    pub fn name(self) -> &'static str {
        match self {
            Preset::White => "white",
            Preset::Lowpass => "lowpass",
            Preset::Pink => "pink",
            Preset::Brown => "brown",
        }
    }

    fn shape(self) -> ArmaModel {
        match self {
            Preset::White => ArmaModel::white(1.0),
            Preset::Lowpass => {
                // |1 - a e^{-iω_c}|² = 2 (1 - a)² solved for the pole a.
                let c = 2.0 - LOWPASS_CUTOFF.cos();
                let a = c - (c * c - 1.0).sqrt();
                ArmaModel::new(vec![a], vec![1.0]).expect("lowpass pole is stable")
            }
            Preset::Pink => {
                let (lo, hi) = PINK_BAND;
                let ratio = (hi / lo).powf(1.0 / PINK_SECTIONS as f64);
                let mut den = vec![1.0];
                let mut num = vec![1.0];
                for i in 0..PINK_SECTIONS {
                    let pole = lo * ratio.powi(i as i32);
                    let zero = pole * ratio.sqrt();
                    den = poly_mul(&den, &[1.0, -(-pole).exp()]);
                    num = poly_mul(&num, &[1.0, -(-zero).exp()]);
                }
                let ar = den[1..].iter().map(|c| -c).collect();
                ArmaModel::new(ar, num).expect("pink poles are stable")
            }
            Preset::Brown => ArmaModel::new(vec![BROWN_POLE], vec![1.0]).expect("brown pole is stable"),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "white" => Ok(Preset::White),
            "lowpass" | "low-pass" | "low_pass" => Ok(Preset::Lowpass),
            "pink" | "1/f" => Ok(Preset::Pink),
            "brown" | "1/f2" | "1/f^2" => Ok(Preset::Brown),
            other => Err(Error::InvalidArgument(format!("unknown spectrum preset '{other}'"))),
        }
    }
}

/// Stable model of the given shape whose integrated power `∫ S dω/2π` is `power`.
pub fn preset(kind: Preset, power: f64) -> Result<ArmaModel> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::InvalidArgument(format!("preset power must be positive, got {power}")));
    }
    kind.shape().with_power(power)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Serialised model: either a named preset with a power, or explicit
/// coefficients (optionally renormalised to `power`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ar: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
}

impl ModelRecord {
    pub fn from_model(model: &ArmaModel) -> Self {
        Self { ar: model.ar().to_vec(), ma: model.ma().to_vec(), kind: None, power: Some(model.variance()) }
    }

    pub fn to_model(&self) -> Result<ArmaModel> {
        match self.kind {
            Some(kind) => preset(kind, self.power.unwrap_or(1.0)),
            None => {
                let m = ArmaModel::new(self.ar.clone(), self.ma.clone())?;
                match self.power {
                    Some(p) if !m.is_zero() => m.with_power(p),
                    _ => Ok(m),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::SpectralDensity;

    fn log_slope(m: &ArmaModel) -> f64 {
        // Least-squares slope of log S against log ω on a log-spaced grid.
        let n = 200;
        let (lo, hi) = ((0.01 * PI).ln(), (0.5 * PI).ln());
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let lw = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                (lw, m.spectrum(lw.exp()).ln())
            })
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn presets_share_integrated_power() {
        for kind in Preset::ALL {
            let m = preset(kind, 1e-4).unwrap();
            let quad = m.integrated_power(1 << 16);
            assert!((quad / 1e-4 - 1.0).abs() < 0.01, "{kind}: {quad}");
            assert!((m.variance() / 1e-4 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn white_is_constant() {
        let m = preset(Preset::White, 2.0).unwrap();
        assert_eq!(m.order(), (0, 0));
        assert!((m.spectrum(0.0) - 2.0).abs() < 1e-12);
        assert!((m.spectrum(3.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lowpass_half_power_point() {
        let m = preset(Preset::Lowpass, 1.0).unwrap();
        let ratio = m.spectrum(LOWPASS_CUTOFF) / m.spectrum(0.0);
        assert!((ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pink_and_brown_slopes() {
        let pink = log_slope(&preset(Preset::Pink, 1.0).unwrap());
        assert!((pink + 1.0).abs() < 0.15, "pink slope {pink}");
        let brown = log_slope(&preset(Preset::Brown, 1.0).unwrap());
        assert!((brown + 2.0).abs() < 0.2, "brown slope {brown}");
    }

    #[test]
    fn names_round_trip() {
        for kind in Preset::ALL {
            assert_eq!(kind.name().parse::<Preset>().unwrap(), kind);
        }
        assert!("violet".parse::<Preset>().is_err());
        assert!(preset(Preset::Pink, 0.0).is_err());
    }

    #[test]
    fn record_serialisation() {
        let r: ModelRecord = toml::from_str("kind = \"pink\"\npower = 0.001\n").unwrap();
        let m = r.to_model().unwrap();
        assert!((m.variance() - 0.001).abs() < 1e-12);
        let explicit = ModelRecord::from_model(&m);
        let text = serde_json::to_string(&explicit).unwrap();
        let back: ModelRecord = serde_json::from_str(&text).unwrap();
        let m2 = back.to_model().unwrap();
        for w in [0.0, 0.1, 1.0] {
            assert!((m2.spectrum(w) / m.spectrum(w) - 1.0).abs() < 1e-9);
        }
    }
}
