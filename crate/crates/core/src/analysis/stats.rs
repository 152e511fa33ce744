//! Quantiles, exceedance curves and estimation-error histograms.

use serde::{Deserialize, Serialize};

use crate::windfield::mean_std;
use crate::{Error, Result};

/// Empirical quantile, linear between order statistics (`h = (n - 1) q`).
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() || !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!("quantile {q} of {} values", values.len())));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceCurve {
    pub channel: String,
    pub case_set: String,
    /// Ascending.
    pub values: Vec<f64>,
    /// `1 - k / (N + 1)` for the k-th smallest value.
    pub probability: Vec<f64>,
}

impl ExceedanceCurve {
    /// The `k` largest points, largest first.
    pub fn upper_tail(&self, k: usize) -> Vec<(f64, f64)> {
        self.values
            .iter()
            .zip(&self.probability)
            .rev()
            .take(k)
            .map(|(v, p)| (*v, *p))
            .collect()
    }
}

pub fn exceedance(extremes: &[f64], channel: &str, case_set: &str) -> ExceedanceCurve {
    let mut values = extremes.to_vec();
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let probability = (1..=values.len()).map(|k| 1.0 - k as f64 / (n + 1.0)).collect();
    ExceedanceCurve {
        channel: channel.into(),
        case_set: case_set.into(),
        values,
        probability,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorHistogram {
    pub bin_width: f64,
    /// `(bin centre, count)`, ascending.
    pub bins: Vec<(f64, usize)>,
    pub bias: f64,
    pub std: f64,
    pub samples: usize,
}

/// Histogram of `estimate - truth`, skipping the first `3 / cutoff` seconds
/// of filter settling.
pub fn error_histogram(estimate: &[f64], truth: &[f64], dt: f64, cutoff: f64, bin_width: f64) -> Result<ErrorHistogram> {
    if estimate.len() != truth.len() || !(bin_width > 0.0) || !(dt > 0.0) || !(cutoff > 0.0) {
        return Err(Error::InvalidArgument("error histogram needs aligned series and positive widths".into()));
    }
    let skip = ((3.0 / cutoff) / dt).ceil() as usize;
    let err: Vec<f64> = estimate.iter().zip(truth).skip(skip).map(|(e, t)| e - t).collect();
    let mut counts = std::collections::BTreeMap::<i64, usize>::new();
    for e in &err {
        *counts.entry((e / bin_width).round() as i64).or_default() += 1;
    }
    let (bias, std) = if err.is_empty() { (0.0, 0.0) } else { mean_std(&err) };
    Ok(ErrorHistogram {
        bin_width,
        bins: counts.into_iter().map(|(k, c)| (k as f64 * bin_width, c)).collect(),
        bias,
        std,
        samples: err.len(),
    })
}

impl ErrorHistogram {
    /// Pool histograms with the same bin width.
    pub fn merge(parts: &[ErrorHistogram]) -> Result<ErrorHistogram> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidArgument("no histograms to merge".into()));
        };
        let width = first.bin_width;
        if parts.iter().any(|h| h.bin_width != width) {
            return Err(Error::InvalidArgument("histograms differ in bin width".into()));
        }
        let mut counts = std::collections::BTreeMap::<i64, usize>::new();
        let (mut n, mut sum, mut sq) = (0usize, 0.0, 0.0);
        for h in parts {
            for &(c, k) in &h.bins {
                *counts.entry((c / width).round() as i64).or_default() += k;
            }
            let m = h.samples as f64;
            n += h.samples;
            sum += h.bias * m;
            sq += (h.std * h.std + h.bias * h.bias) * m;
        }
        let (bias, std) = if n == 0 {
            (0.0, 0.0)
        } else {
            let mean = sum / n as f64;
            (mean, (sq / n as f64 - mean * mean).max(0.0).sqrt())
        };
        Ok(ErrorHistogram {
            bin_width: width,
            bins: counts.into_iter().map(|(k, c)| (k as f64 * width, c)).collect(),
            bias,
            std,
            samples: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_examples() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert!((quantile(&v, 0.8).unwrap() - 8.2).abs() < 1e-12);
        assert_eq!(quantile(&v, 1.0).unwrap(), 10.0);
        assert_eq!(quantile(&[3.3; 7], 0.8).unwrap(), 3.3);
        assert!(quantile(&[], 0.5).is_err());
    }

    #[test]
    fn exceedance_plotting_positions() {
        let v: Vec<f64> = (1..=9).rev().map(f64::from).collect();
        let c = exceedance(&v, "tower", "etm");
        let expect = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1];
        for (p, e) in c.probability.iter().zip(expect) {
            assert!((p - e).abs() < 1e-12);
        }
        assert_eq!(c.values[0], 1.0);
        assert_eq!(c.upper_tail(1), vec![(9.0, c.probability[8])]);
    }

    #[test]
    fn histogram_examples() {
        let t: Vec<f64> = (0..500).map(|k| (k as f64 * 0.1).sin()).collect();
        let h = error_histogram(&t, &t, 0.1, 0.08, 0.001).unwrap();
        assert_eq!(h.bins, vec![(0.0, h.samples)]);
        let off: Vec<f64> = t.iter().map(|v| v + 0.01).collect();
        let h = error_histogram(&off, &t, 0.1, 0.08, 0.001).unwrap();
        assert!((h.bias - 0.01).abs() < 1e-12 && h.std < 1e-12);
        assert_eq!(h.samples, 500 - 375);
    }

    #[test]
    fn merged_histogram_matches_pooled_errors() {
        let truth = vec![0.0; 600];
        let a: Vec<f64> = (0..600).map(|k| 0.01 * (k % 7) as f64).collect();
        let b: Vec<f64> = (0..600).map(|k| -0.02 + 0.01 * (k % 3) as f64).collect();
        let ha = error_histogram(&a, &truth, 0.1, 0.5, 0.01).unwrap();
        let hb = error_histogram(&b, &truth, 0.1, 0.5, 0.01).unwrap();
        let m = ErrorHistogram::merge(&[ha.clone(), hb.clone()]).unwrap();
        let pooled: Vec<f64> = a[60..].iter().chain(&b[60..]).copied().collect();
        let (mean, std) = mean_std(&pooled);
        assert_eq!(m.samples, ha.samples + hb.samples);
        assert!((m.bias - mean).abs() < 1e-12 && (m.std - std).abs() < 1e-12);
        assert_eq!(m.bins.iter().map(|b| b.1).sum::<usize>(), m.samples);
    }
}
