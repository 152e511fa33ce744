//! Welch-averaged magnitude-squared coherence.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Samples per segment, a power of two.
    pub segment_len: usize,
    pub overlap: f64,
    /// Hz
    pub sample_rate: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            segment_len: 1024,
            overlap: 0.5,
            sample_rate: 10.0,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.segment_len.is_power_of_two() || self.segment_len < 8 {
            return Err(Error::InvalidArgument(format!(
                "segment length {} must be a power of two >= 8",
                self.segment_len
            )));
        }
        if !(0.0..=0.9).contains(&self.overlap) || !(self.sample_rate > 0.0) {
            return Err(Error::InvalidArgument("overlap must be in [0, 0.9] and the sample rate positive".into()));
        }
        Ok(())
    }

    fn hop(&self) -> usize {
        ((self.segment_len as f64 * (1.0 - self.overlap)).round() as usize).max(1)
    }

    /// Number of Welch segments in a series of `n` samples.
    pub fn segments(&self, n: usize) -> usize {
        if n < self.segment_len {
            0
        } else {
            (n - self.segment_len) / self.hop() + 1
        }
    }
}

/// Coherence per frequency bin; `None` where an auto-spectrum vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceCurve {
    pub frequency: Vec<f64>,
    pub coherence: Vec<Option<f64>>,
}

impl CoherenceCurve {
    /// Mean coherence over bins with `f0 <= f < f1`.
    pub fn band_mean(&self, f0: f64, f1: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .frequency
            .iter()
            .zip(&self.coherence)
            .filter(|(f, _)| **f >= f0 && **f < f1)
            .filter_map(|(_, c)| *c)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

/// Accumulates Welch auto- and cross-spectra over one or more series pairs.
#[derive(Debug, Clone)]
pub struct CrossSpectrum {
    cfg: SpectralConfig,
    window: Vec<f64>,
    pxx: Vec<f64>,
    pyy: Vec<f64>,
    pxy: Vec<Complex<f64>>,
    averages: usize,
}

impl CrossSpectrum {
    pub fn new(cfg: SpectralConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.segment_len;
        let window = (0..n)
            .map(|k| 0.5 - 0.5 * (std::f64::consts::TAU * k as f64 / n as f64).cos())
            .collect();
        let bins = n / 2 + 1;
        Ok(Self {
            cfg,
            window,
            pxx: vec![0.0; bins],
            pyy: vec![0.0; bins],
            pxy: vec![Complex::new(0.0, 0.0); bins],
            averages: 0,
        })
    }

    pub fn averages(&self) -> usize {
        self.averages
    }

    pub fn add(&mut self, x: &[f64], y: &[f64]) -> Result<()> {
        if x.len() != y.len() {
            return Err(Error::InvalidArgument("coherence inputs differ in length".into()));
        }
        let n = self.cfg.segment_len;
        let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
        let taper = |s: &[f64]| -> Vec<Complex<f64>> {
            let mean = s.iter().sum::<f64>() / n as f64;
            s.iter()
                .zip(&self.window)
                .map(|(v, w)| Complex::new((v - mean) * w, 0.0))
                .collect()
        };
        for seg in 0..self.cfg.segments(x.len()) {
            let start = seg * self.cfg.hop();
            let mut fx = taper(&x[start..start + n]);
            let mut fy = taper(&y[start..start + n]);
            fft.process(&mut fx);
            fft.process(&mut fy);
            for k in 0..self.pxx.len() {
                self.pxx[k] += fx[k].norm_sqr();
                self.pyy[k] += fy[k].norm_sqr();
                self.pxy[k] += fx[k].conj() * fy[k];
            }
            self.averages += 1;
        }
        Ok(())
    }

    /// Coherence for bins 1..=n/2 (DC excluded).
    pub fn coherence(&self) -> CoherenceCurve {
        let n = self.cfg.segment_len;
        let df = self.cfg.sample_rate / n as f64;
        let scale = self.pxx.iter().chain(&self.pyy).fold(0.0f64, |m, v| m.max(*v));
        let floor = scale * 1e-24;
        let (frequency, coherence) = (1..self.pxx.len())
            .map(|k| {
                let c = if self.pxx[k] > floor && self.pyy[k] > floor {
                    Some(self.pxy[k].norm_sqr() / (self.pxx[k] * self.pyy[k]))
                } else {
                    None
                };
                (k as f64 * df, c)
            })
            .unzip();
        CoherenceCurve { frequency, coherence }
    }
}

/// Coherence of one series pair; needs at least four Welch segments.
pub fn coherence(x: &[f64], y: &[f64], cfg: &SpectralConfig) -> Result<CoherenceCurve> {
    if cfg.segments(x.len()) < 4 {
        return Err(Error::InvalidArgument(format!(
            "{} samples give fewer than 4 segments of {}",
            x.len(),
            cfg.segment_len
        )));
    }
    let mut cs = CrossSpectrum::new(*cfg)?;
    cs.add(x, y)?;
    Ok(cs.coherence())
}

/// Lowest frequency where the interpolated coherence falls through 0.5.
pub fn coherence_half_crossing(curve: &CoherenceCurve) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .frequency
        .iter()
        .zip(&curve.coherence)
        .filter_map(|(f, c)| c.map(|c| (*f, c)))
        .collect();
    pts.windows(2).find_map(|w| {
        let ((f0, c0), (f1, c1)) = (w[0], w[1]);
        (c0 >= 0.5 && c1 < 0.5).then(|| f0 + (c0 - 0.5) / (c0 - c1) * (f1 - f0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
    }

    #[test]
    fn self_coherence_is_one() {
        let x = noise(1, 8192);
        let c = coherence(&x, &x, &SpectralConfig::default()).unwrap();
        assert!(c.coherence.iter().flatten().all(|v| (v - 1.0).abs() < 1e-9));
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        let c = coherence(&x, &y, &SpectralConfig::default()).unwrap();
        assert!(c.coherence.iter().flatten().all(|v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn independent_noise_has_low_coherence() {
        let cfg = SpectralConfig::default();
        let x = noise(1, 1024 * 40);
        let y = noise(2, 1024 * 40);
        assert!(cfg.segments(x.len()) >= 32);
        let c = coherence(&x, &y, &cfg).unwrap();
        let vals: Vec<f64> = c.coherence.iter().flatten().copied().collect();
        assert!(vals.iter().sum::<f64>() / (vals.len() as f64) < 0.15);
    }

    #[test]
    fn small_delay_keeps_coherence() {
        let cfg = SpectralConfig::default();
        // smooth signal so a two-sample delay is small against the segment
        let raw = noise(5, 20000);
        let x: Vec<f64> = crate::estimator::lowpass(&raw, 0.5, 0.7, 0.1).unwrap();
        let y: Vec<f64> = (0..x.len()).map(|k| x[k.saturating_sub(2)]).collect();
        let c = coherence(&x, &y, &cfg).unwrap();
        assert!(c.band_mean(0.0, 0.5).unwrap() > 0.95);
    }

    #[test]
    fn zero_spectrum_bins_are_missing() {
        let x = vec![1.0; 8192];
        let y = noise(3, 8192);
        let c = coherence(&x, &y, &SpectralConfig::default()).unwrap();
        assert!(c.coherence.iter().all(|v| v.is_none()));
    }

    #[test]
    fn half_crossing_interpolates() {
        let curve = CoherenceCurve {
            frequency: vec![0.05, 0.10],
            coherence: vec![Some(0.8), Some(0.2)],
        };
        assert!((coherence_half_crossing(&curve).unwrap() - 0.075).abs() < 1e-12);
        let flat = CoherenceCurve {
            frequency: vec![0.05, 0.10],
            coherence: vec![Some(1.0), Some(1.0)],
        };
        assert!(coherence_half_crossing(&flat).is_none());
    }

    #[test]
    fn rejects_short_input_and_bad_config() {
        let x = noise(1, 2000);
        assert!(coherence(&x, &x, &SpectralConfig::default()).is_err());
        let bad = SpectralConfig {
            segment_len: 1000,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
