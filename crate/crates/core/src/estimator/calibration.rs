//! Per-wind-bin additive bias of the filtered estimates.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default calibration bins, the NTM mean wind speeds, m/s.
pub const DEFAULT_BINS: [f64; 3] = [10.0, 12.0, 14.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasEntry {
    pub wind: f64,
    pub u_eff: f64,
    pub delta_v: f64,
    pub delta_h: f64,
    pub samples: usize,
}

/// Bias table, linear between bin centres and flat outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasTable {
    #[serde(rename = "bin")]
    pub bins: Vec<BiasEntry>,
}

impl Default for BiasTable {
    fn default() -> Self {
        Self::zero(&DEFAULT_BINS)
    }
}

impl BiasTable {
    pub fn zero(bins: &[f64]) -> Self {
        Self {
            bins: bins
                .iter()
                .map(|&wind| BiasEntry {
                    wind,
                    u_eff: 0.0,
                    delta_v: 0.0,
                    delta_h: 0.0,
                    samples: 0,
                })
                .collect(),
        }
    }

    /// `(u_eff, delta_v, delta_h)` bias at estimated wind `u`.
    pub fn at(&self, u: f64) -> (f64, f64, f64) {
        let b = &self.bins;
        let pick = |e: &BiasEntry| (e.u_eff, e.delta_v, e.delta_h);
        match b.len() {
            0 => (0.0, 0.0, 0.0),
            _ if u <= b[0].wind => pick(&b[0]),
            n if u >= b[n - 1].wind => pick(&b[n - 1]),
            _ => {
                let j = b.partition_point(|e| e.wind <= u) - 1;
                let (lo, hi) = (&b[j], &b[j + 1]);
                let a = (u - lo.wind) / (hi.wind - lo.wind);
                let lerp = |x: f64, y: f64| x + a * (y - x);
                (
                    lerp(lo.u_eff, hi.u_eff),
                    lerp(lo.delta_v, hi.delta_v),
                    lerp(lo.delta_h, hi.delta_h),
                )
            }
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("bias table serialises")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let t: Self = toml::from_str(text).map_err(|e| Error::Table(e.to_string()))?;
        if !t.bins.windows(2).all(|w| w[1].wind > w[0].wind) {
            return Err(Error::Table("bias bins must be strictly ascending".into()));
        }
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::harness::write_atomic(path, self.to_toml().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })
    }
}

/// One run of aligned estimate and truth series, `[u_eff, delta_v, delta_h]`.
#[derive(Debug, Clone, Default)]
pub struct CalibrationRun {
    pub wind_bin: f64,
    pub estimate: [Vec<f64>; 3],
    pub truth: [Vec<f64>; 3],
}

/// Mean estimate-minus-truth per bin. Runs are assigned to the nearest bin;
/// bins without runs get zero bias and a warning.
pub fn calibrate(runs: &[CalibrationRun], bins: &[f64]) -> Result<(BiasTable, Vec<String>)> {
    if bins.is_empty() || !bins.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument("calibration bins must be nonempty and ascending".into()));
    }
    let mut sums = vec![[0.0; 3]; bins.len()];
    let mut counts = vec![0usize; bins.len()];
    for run in runs {
        let j = nearest(bins, run.wind_bin);
        for c in 0..3 {
            if run.estimate[c].len() != run.truth[c].len() {
                return Err(Error::InvalidArgument("estimate and truth series differ in length".into()));
            }
            sums[j][c] += run.estimate[c].iter().zip(&run.truth[c]).map(|(e, t)| e - t).sum::<f64>();
        }
        counts[j] += run.estimate[0].len();
    }
    let mut warnings = Vec::new();
    let entries = bins
        .iter()
        .enumerate()
        .map(|(j, &wind)| {
            let n = counts[j];
            if n == 0 {
                warnings.push(format!("calibration bin {wind} m/s has no samples, bias set to zero"));
            }
            let mean = |c: usize| if n > 0 { sums[j][c] / n as f64 } else { 0.0 };
            BiasEntry {
                wind,
                u_eff: mean(0),
                delta_v: mean(1),
                delta_h: mean(2),
                samples: n,
            }
        })
        .collect();
    Ok((BiasTable { bins: entries }, warnings))
}

fn nearest(bins: &[f64], u: f64) -> usize {
    bins.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - u).abs().total_cmp(&(b.1 - u).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}
