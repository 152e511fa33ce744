//! Per-segment load extremes and wind statistics, and threshold calibration.

use serde::{Deserialize, Serialize};

use super::series::CaseSeries;
use super::stats::quantile;
use crate::controller::{ThresholdEntry, ThresholdTable};
use crate::estimator::BiasTable;
use crate::windfield::{mean_std, segment_statistics, TruthStatistics};
use crate::{Error, Result};

/// Signed value of largest magnitude.
pub fn signed_extreme(x: &[f64]) -> f64 {
    x.iter().copied().fold(0.0, |m, v| if v.abs() > m.abs() { v } else { m })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateStatistics {
    pub u_mean: f64,
    pub u_std: f64,
    pub delta_mean: f64,
    pub delta_std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentRow {
    pub index: usize,
    pub t0: f64,
    pub t1: f64,
    pub m_tower_fa: f64,
    /// Over all three blades.
    pub m_oop: f64,
    pub m_hub_tilt: f64,
    pub thrust: f64,
    pub truth: TruthStatistics,
    pub estimate: EstimateStatistics,
    pub mean_power: f64,
    /// Share of samples with `p_sp < 1`.
    pub derated_fraction: f64,
}

/// Split `series` into full segments of `length` seconds from its first sample.
pub fn segment_stats(series: &CaseSeries, length: f64) -> Result<Vec<SegmentRow>> {
    let dt = series.dt();
    if !(dt > 0.0) || !(length >= dt) {
        return Err(Error::InvalidArgument(format!("segment length {length} s at sample interval {dt} s")));
    }
    let per = (length / dt).round() as usize;
    let n = series.len() / per;
    (0..n)
        .map(|i| {
            let r = i * per..(i + 1) * per;
            let s = series.slice(r);
            let oop = [signed_extreme(&s.m_oop1), signed_extreme(&s.m_oop2), signed_extreme(&s.m_oop3)];
            let (u_mean, u_std) = mean_std(&s.u_eff_est);
            let (delta_mean, delta_std) = mean_std(&s.delta_est);
            Ok(SegmentRow {
                index: i,
                t0: s.time[0],
                t1: s.time[0] + per as f64 * dt,
                m_tower_fa: signed_extreme(&s.m_tower_fa),
                m_oop: signed_extreme(&oop),
                m_hub_tilt: signed_extreme(&s.m_hub_tilt),
                thrust: signed_extreme(&s.thrust),
                truth: segment_statistics(&s.u_eff_true, &s.delta_true)?,
                estimate: EstimateStatistics {
                    u_mean,
                    u_std,
                    delta_mean,
                    delta_std,
                },
                mean_power: s.power.iter().sum::<f64>() / per as f64,
                derated_fraction: s.p_sp.iter().filter(|&&p| p < 1.0).count() as f64 / per as f64,
            })
        })
        .collect()
}

/// Buffer statistics of the estimated shear over one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowStat {
    pub u_mean: f64,
    pub delta_mean: f64,
    pub delta_std: f64,
}

/// Filtered estimates of a run made with a zero bias table, calibrated with `bias`:
/// `(u_eff, delta)` per sample.
pub fn calibrated_estimates(series: &CaseSeries, bias: &BiasTable) -> (Vec<f64>, Vec<f64>) {
    (0..series.len())
        .map(|k| {
            let u = series.u_eff_est[k];
            let (bu, bv, bh) = bias.at(u);
            (u - bu, (series.delta_v_est[k] - bv).hypot(series.delta_h_est[k] - bh))
        })
        .unzip()
}

/// Statistics over disjoint windows of `window` seconds.
pub fn window_stats(u: &[f64], delta: &[f64], dt: f64, window: f64) -> Vec<WindowStat> {
    let per = ((window / dt).round() as usize).max(1);
    u.chunks_exact(per)
        .zip(delta.chunks_exact(per))
        .map(|(uc, dc)| {
            let (delta_mean, delta_std) = mean_std(dc);
            WindowStat {
                u_mean: uc.iter().sum::<f64>() / per as f64,
                delta_mean,
                delta_std,
            }
        })
        .collect()
}

/// Per-bin `q` quantiles of window statistics. `samples` pairs each window
/// with the nominal wind of its case; a bin with fewer than `min_windows`
/// uses the pooled quantile and is reported in the warnings.
pub fn quantile_threshold(
    samples: &[(f64, WindowStat)],
    bins: &[f64],
    q: f64,
    min_windows: usize,
) -> Result<(ThresholdTable, Vec<String>)> {
    if samples.is_empty() {
        return Err(Error::InsufficientCases(vec!["no NTM windows".into()]));
    }
    let all_mean: Vec<f64> = samples.iter().map(|s| s.1.delta_mean).collect();
    let all_std: Vec<f64> = samples.iter().map(|s| s.1.delta_std).collect();
    let pooled = (quantile(&all_mean, q)?, quantile(&all_std, q)?);
    let mut warnings = Vec::new();
    let mut entries = Vec::with_capacity(bins.len());
    for &wind in bins {
        let in_bin: Vec<&WindowStat> = samples
            .iter()
            .filter(|s| (s.0 - wind).abs() < 1e-9)
            .map(|s| &s.1)
            .collect();
        let (delta_avg, delta_std) = if in_bin.len() < min_windows {
            warnings.push(format!(
                "threshold bin {wind} m/s has {} windows (< {min_windows}); using pooled quantiles",
                in_bin.len()
            ));
            pooled
        } else {
            let m: Vec<f64> = in_bin.iter().map(|s| s.delta_mean).collect();
            let d: Vec<f64> = in_bin.iter().map(|s| s.delta_std).collect();
            (quantile(&m, q)?, quantile(&d, q)?)
        };
        entries.push(ThresholdEntry {
            wind,
            delta_avg,
            delta_std,
            windows: in_bin.len(),
        });
    }
    Ok((ThresholdTable { bins: entries }, warnings))
}

/// Share of windows in which either statistic exceeds its threshold at the
/// window's mean estimated wind.
pub fn trigger_fraction(windows: &[WindowStat], thresholds: &ThresholdTable) -> f64 {
    if windows.is_empty() {
        return 0.0;
    }
    let hits = windows
        .iter()
        .filter(|w| {
            let (ta, ts) = thresholds.at(w.u_mean);
            w.delta_mean > ta || w.delta_std > ts
        })
        .count();
    hits as f64 / windows.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize, f: impl Fn(usize) -> f64) -> CaseSeries {
        let mut s = CaseSeries::default();
        for k in 0..n {
            let mut row = vec![0.0; CaseSeries::COLUMNS.len()];
            row[0] = 100.0 + k as f64 * 0.1;
            for (j, name) in CaseSeries::COLUMNS.iter().enumerate() {
                match *name {
                    "u_eff_true" | "u_eff_est" => row[j] = 12.0,
                    "p_sp" => row[j] = 1.0,
                    "m_tower_fa" | "m_oop2" => row[j] = f(k),
                    _ => {}
                }
            }
            s.push_row(&row);
        }
        s
    }

    #[test]
    fn six_segments_from_600_s() {
        let s = series(6000, |_| 5.0);
        let rows = segment_stats(&s, 100.0).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.m_tower_fa == 5.0 && r.m_oop == 5.0));
    }

    #[test]
    fn triangle_wave_extremes() {
        // period 20 s, amplitude 3, offset -1: extreme magnitude is -4
        let s = series(2000, |k| {
            let t = k as f64 * 0.1;
            let ph = (t % 20.0) / 20.0;
            -1.0 + 3.0 * (1.0 - 4.0 * (ph - 0.5).abs()) * -1.0
        });
        let rows = segment_stats(&s, 100.0).unwrap();
        assert!(rows.iter().all(|r| (r.m_tower_fa + 4.0).abs() < 1e-9));
    }

    #[test]
    fn identical_cases_give_identical_rows() {
        let a = series(2000, |k| (std::f64::consts::TAU * k as f64 / 100.0).sin());
        let rows = segment_stats(&a, 100.0).unwrap();
        assert_eq!(rows[0].m_tower_fa, rows[1].m_tower_fa);
        assert_eq!(rows[0].truth, rows[1].truth);
    }

    #[test]
    fn thresholds_fall_back_to_pooled_for_sparse_bins() {
        let mk = |m: f64| WindowStat {
            u_mean: 12.0,
            delta_mean: m,
            delta_std: m / 2.0,
        };
        let mut samples: Vec<(f64, WindowStat)> = (1..=10).map(|k| (12.0, mk(k as f64))).collect();
        samples.push((10.0, mk(100.0)));
        let (t, w) = quantile_threshold(&samples, &[10.0, 12.0], 0.8, 5).unwrap();
        assert!((t.bins[1].delta_avg - 8.2).abs() < 1e-12);
        assert_eq!(w.len(), 1);
        assert_eq!(t.bins[0].windows, 1);
        let doubled: Vec<_> = samples.iter().chain(&samples).copied().collect();
        let (t2, _) = quantile_threshold(&doubled, &[10.0, 12.0], 0.8, 5).unwrap();
        // duplication moves the interpolation position only by rounding here
        assert!((t.bins[1].delta_avg - t2.bins[1].delta_avg).abs() < 1e-12);
        assert!((t.bins[1].delta_std - t2.bins[1].delta_std).abs() < 1e-12);
        assert!(quantile_threshold(&[], &[12.0], 0.8, 5).is_err());
    }
}
