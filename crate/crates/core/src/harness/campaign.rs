//! Campaign execution, calibration and the baseline/TLAC comparison.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::case::{DlcCase, Variant};
use super::persist::save_case;
use super::run::{run_case, CaseResult, RunContext};
use crate::analysis::{
    calibrated_estimates, coherence_half_crossing, error_histogram, exceedance, quantile_threshold, window_stats,
    CoherenceCurve, CrossSpectrum, ErrorHistogram, ExceedanceCurve, SpectralConfig, WindowStat,
};
use crate::controller::ThresholdTable;
use crate::estimator::{calibrate, BiasTable, CalibrationRun};
use crate::windfield::TurbulenceModel;
use crate::{Error, Result};

/// Threshold quantile over the NTM windows.
pub const THRESHOLD_QUANTILE: f64 = 0.8;
/// Fewest windows a wind bin needs for its own threshold.
pub const MIN_BIN_WINDOWS: usize = 5;

/// Run `cases` in parallel, keeping their order. Each result is saved under
/// `out` when given. Failed cases are returned, not raised.
pub fn run_campaign(cases: &[DlcCase], ctx: &RunContext, out: Option<&Path>) -> Result<Vec<CaseResult>> {
    cases
        .par_iter()
        .map(|case| {
            let result = run_case(case, ctx)?;
            if let Some(dir) = out {
                save_case(dir, &result)?;
            }
            Ok(result)
        })
        .collect()
}

/// `(ok, failed ids)`.
pub fn partition_failed(results: &[CaseResult]) -> (Vec<&CaseResult>, Vec<String>) {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for r in results {
        if r.is_ok() {
            ok.push(r);
        } else {
            failed.push(r.case.id());
        }
    }
    (ok, failed)
}

/// Estimator bias and TLAC thresholds derived from NTM baseline runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub bias: BiasTable,
    pub thresholds: ThresholdTable,
    pub warnings: Vec<String>,
}

fn ntm_baseline(results: &[CaseResult]) -> Vec<&CaseResult> {
    results
        .iter()
        .filter(|r| r.is_ok() && r.case.model == TurbulenceModel::Ntm && r.case.variant == Variant::Baseline)
        .collect()
}

/// 60 s windows of calibrated estimates, tagged with the case wind.
pub fn estimate_windows(result: &CaseResult, bias: &BiasTable, window: f64) -> Vec<(f64, WindowStat)> {
    let (u, d) = calibrated_estimates(&result.series, bias);
    window_stats(&u, &d, result.series.dt(), window)
        .into_iter()
        .map(|w| (result.case.mean_wind, w))
        .collect()
}

/// Bias from the filtered estimates of baseline NTM runs made with a zero bias
/// table, then per-wind 80% quantile thresholds of the calibrated 60 s windows.
pub fn calibrate_campaign(results: &[CaseResult], winds: &[f64], window: f64) -> Result<Calibration> {
    let ntm = ntm_baseline(results);
    let missing: Vec<String> = winds
        .iter()
        .filter(|&&w| !ntm.iter().any(|r| (r.case.mean_wind - w).abs() < 1e-9))
        .map(|w| format!("ntm {w:.1} m/s baseline"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::InsufficientCases(missing));
    }
    let runs: Vec<CalibrationRun> = ntm
        .iter()
        .map(|r| {
            let s = &r.series;
            CalibrationRun {
                wind_bin: r.case.mean_wind,
                estimate: [s.u_eff_est.clone(), s.delta_v_est.clone(), s.delta_h_est.clone()],
                truth: [s.u_eff_true.clone(), s.delta_v_true.clone(), s.delta_h_true.clone()],
            }
        })
        .collect();
    let (bias, mut warnings) = calibrate(&runs, winds)?;
    let samples: Vec<(f64, WindowStat)> = ntm.iter().flat_map(|r| estimate_windows(r, &bias, window)).collect();
    let (thresholds, w2) = quantile_threshold(&samples, winds, THRESHOLD_QUANTILE, MIN_BIN_WINDOWS)?;
    warnings.extend(w2);
    Ok(Calibration {
        bias,
        thresholds,
        warnings,
    })
}

impl Calibration {
    /// Context for the TLAC runs: calibrated estimator and thresholds.
    pub fn apply(&self, ctx: &RunContext) -> RunContext {
        let mut next = ctx.clone();
        next.estimator.bias = self.bias.clone();
        next.controller.tlac.thresholds = self.thresholds.clone();
        next
    }
}

/// Estimate-versus-truth coherence accumulated over a set of runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub u_eff: CoherenceCurve,
    pub delta_v: CoherenceCurve,
    pub u_eff_half: Option<f64>,
    pub delta_v_half: Option<f64>,
    pub segments: usize,
}

/// Uses the unfiltered estimates.
pub fn coherence_report(results: &[&CaseResult], cfg: SpectralConfig) -> Result<CoherenceReport> {
    let mut u = CrossSpectrum::new(cfg)?;
    let mut v = CrossSpectrum::new(cfg)?;
    for r in results {
        let s = &r.series;
        u.add(&s.u_eff_true, &s.u_eff_raw)?;
        v.add(&s.delta_v_true, &s.delta_v_raw)?;
    }
    let (cu, cv) = (u.coherence(), v.coherence());
    Ok(CoherenceReport {
        u_eff_half: coherence_half_crossing(&cu),
        delta_v_half: coherence_half_crossing(&cv),
        segments: u.averages(),
        u_eff: cu,
        delta_v: cv,
    })
}

/// Load channels compared between variants.
pub const CHANNELS: [&str; 3] = ["m_tower_fa", "m_oop", "m_hub_tilt"];

fn channel_extremes(results: &[&CaseResult], channel: &str) -> Vec<f64> {
    results
        .iter()
        .flat_map(|r| r.segments.iter())
        .map(|s| match channel {
            "m_tower_fa" => s.m_tower_fa,
            "m_oop" => s.m_oop,
            "m_hub_tilt" => s.m_hub_tilt,
            _ => unreachable!("unknown channel {channel}"),
        })
        .map(f64::abs)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelComparison {
    pub channel: String,
    pub model: TurbulenceModel,
    pub baseline: ExceedanceCurve,
    pub tlac: ExceedanceCurve,
}

impl ChannelComparison {
    /// TLAC over baseline, largest extreme.
    pub fn max_ratio(&self) -> f64 {
        let last = |c: &ExceedanceCurve| c.values.last().copied().unwrap_or(f64::NAN);
        last(&self.tlac) / last(&self.baseline)
    }

    /// TLAC at or below baseline at each of the `k` largest points.
    pub fn tail_at_or_below(&self, k: usize) -> bool {
        self.tlac
            .upper_tail(k)
            .iter()
            .zip(self.baseline.upper_tail(k))
            .all(|(t, b)| t.0 <= b.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriggerRow {
    pub model: TurbulenceModel,
    pub wind: f64,
    pub cases: usize,
    /// Mean share of scored time with `p_sp < 1` under TLAC.
    pub derated_fraction: f64,
    pub baseline_power: f64,
    pub tlac_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub channels: Vec<ChannelComparison>,
    /// Mean NTM power under TLAC over baseline.
    pub ntm_power_ratio: f64,
    pub triggers: Vec<TriggerRow>,
    /// Wind cases left out because either variant failed.
    pub excluded: Vec<String>,
}

/// Pair results by wind realisation and compare the variants.
pub fn compare(baseline: &[CaseResult], tlac: &[CaseResult]) -> Result<ComparisonReport> {
    let index = |rs: &[CaseResult]| -> Result<BTreeMap<String, CaseResult>> {
        let mut m = BTreeMap::new();
        for r in rs {
            if m.insert(r.case.wind_id(), r.clone()).is_some() {
                return Err(Error::MismatchedMatrices(format!("duplicate case {}", r.case.wind_id())));
            }
        }
        Ok(m)
    };
    let (b, t) = (index(baseline)?, index(tlac)?);
    if b.len() != t.len() || b.keys().zip(t.keys()).any(|(x, y)| x != y) {
        let only_b: Vec<&String> = b.keys().filter(|k| !t.contains_key(*k)).collect();
        let only_t: Vec<&String> = t.keys().filter(|k| !b.contains_key(*k)).collect();
        return Err(Error::MismatchedMatrices(format!(
            "only in baseline: {only_b:?}; only in comparison: {only_t:?}"
        )));
    }
    let mut pairs = Vec::new();
    let mut excluded = Vec::new();
    for (id, rb) in &b {
        let rt = &t[id];
        if rb.field_seed != rt.field_seed {
            return Err(Error::MismatchedMatrices(format!("{id} uses different wind fields")));
        }
        if rb.is_ok() && rt.is_ok() {
            pairs.push((rb, rt));
        } else {
            excluded.push(id.clone());
        }
    }

    let mut channels = Vec::new();
    let models: Vec<TurbulenceModel> = {
        let mut m: Vec<_> = pairs.iter().map(|p| p.0.case.model).collect();
        m.sort();
        m.dedup();
        m
    };
    for &model in &models {
        let sel = |which: usize| -> Vec<&CaseResult> {
            pairs
                .iter()
                .filter(|p| p.0.case.model == model)
                .map(|p| if which == 0 { p.0 } else { p.1 })
                .collect()
        };
        let (rb, rt) = (sel(0), sel(1));
        for ch in CHANNELS {
            channels.push(ChannelComparison {
                channel: ch.into(),
                model,
                baseline: exceedance(&channel_extremes(&rb, ch), ch, &format!("{model}_{}", variant_label(&rb))),
                tlac: exceedance(&channel_extremes(&rt, ch), ch, &format!("{model}_{}", variant_label(&rt))),
            });
        }
    }

    let mean_power = |rs: &mut dyn Iterator<Item = &CaseResult>| {
        let (s, n) = rs.fold((0.0, 0usize), |(s, n), r| (s + r.summary.mean_power, n + 1));
        s / n.max(1) as f64
    };
    let ntm: Vec<_> = pairs.iter().filter(|p| p.0.case.model == TurbulenceModel::Ntm).collect();
    let ntm_power_ratio = mean_power(&mut ntm.iter().map(|p| p.1)) / mean_power(&mut ntm.iter().map(|p| p.0));

    let mut cells: BTreeMap<(TurbulenceModel, u64), Vec<&(&CaseResult, &CaseResult)>> = BTreeMap::new();
    for p in &pairs {
        cells.entry((p.0.case.model, p.0.case.mean_wind.to_bits())).or_default().push(p);
    }
    let triggers = cells
        .into_iter()
        .map(|((model, w), ps)| {
            let n = ps.len() as f64;
            TriggerRow {
                model,
                wind: f64::from_bits(w),
                cases: ps.len(),
                derated_fraction: ps.iter().map(|p| p.1.summary.derated_fraction).sum::<f64>() / n,
                baseline_power: ps.iter().map(|p| p.0.summary.mean_power).sum::<f64>() / n,
                tlac_power: ps.iter().map(|p| p.1.summary.mean_power).sum::<f64>() / n,
            }
        })
        .collect();

    Ok(ComparisonReport {
        channels,
        ntm_power_ratio,
        triggers,
        excluded,
    })
}

fn variant_label(rs: &[&CaseResult]) -> &'static str {
    rs.first().map_or("none", |r| r.case.variant.as_str())
}

impl ComparisonReport {
    pub fn channel(&self, model: TurbulenceModel, channel: &str) -> Option<&ChannelComparison> {
        self.channels.iter().find(|c| c.model == model && c.channel == channel)
    }

    /// Plot-ready text: exceedance rows `value probability case_set`, then
    /// the trigger table and power ratio.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.channels {
            let _ = writeln!(s, "[exceedance {} {}]", c.model, c.channel);
            let _ = writeln!(s, "value probability case_set");
            for curve in [&c.baseline, &c.tlac] {
                for (v, p) in curve.values.iter().zip(&curve.probability) {
                    let _ = writeln!(s, "{v:.6e} {p:.6} {}", curve.case_set);
                }
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s, "[triggers]");
        let _ = writeln!(s, "model wind cases derated_fraction baseline_power tlac_power");
        for t in &self.triggers {
            let _ = writeln!(
                s,
                "{} {:.1} {} {:.6} {:.6e} {:.6e}",
                t.model, t.wind, t.cases, t.derated_fraction, t.baseline_power, t.tlac_power
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "[summary]");
        let _ = writeln!(s, "ntm_power_ratio {:.6}", self.ntm_power_ratio);
        for c in &self.channels {
            let _ = writeln!(s, "max_ratio {} {} {:.6}", c.model, c.channel, c.max_ratio());
        }
        let _ = writeln!(s, "excluded {}", self.excluded.len());
        s
    }
}

/// Coherence, shear error histograms and segment rows as plot-ready text.
/// Estimates are corrected with `bias` when the runs used a zero table.
pub fn analysis_text(results: &[CaseResult], bias: Option<&BiasTable>, cutoff: f64, bin_width: f64) -> Result<String> {
    let ok: Vec<&CaseResult> = results.iter().filter(|r| r.is_ok()).collect();
    if ok.is_empty() {
        return Err(Error::InvalidArgument("no completed cases to analyse".into()));
    }
    let mut s = String::new();
    let coh = coherence_report(&ok, SpectralConfig::default())?;
    let fmt = |c: Option<f64>| c.map_or("NA".to_string(), |v| format!("{v:.6}"));
    let _ = writeln!(s, "[coherence]");
    let _ = writeln!(s, "frequency u_eff delta_v");
    for (i, f) in coh.u_eff.frequency.iter().enumerate() {
        let _ = writeln!(s, "{f:.6} {} {}", fmt(coh.u_eff.coherence[i]), fmt(coh.delta_v.coherence[i]));
    }
    let _ = writeln!(s, "half_crossing u_eff {} delta_v {}", fmt(coh.u_eff_half), fmt(coh.delta_v_half));
    let _ = writeln!(s, "segments_averaged {}", coh.segments);

    for (name, pick) in [("delta_v", 1usize), ("delta_h", 2)] {
        let parts = ok
            .iter()
            .map(|r| {
                let sr = &r.series;
                let (est, truth) = if pick == 1 {
                    (&sr.delta_v_est, &sr.delta_v_true)
                } else {
                    (&sr.delta_h_est, &sr.delta_h_true)
                };
                let est: Vec<f64> = match bias {
                    Some(b) => est
                        .iter()
                        .zip(&sr.u_eff_est)
                        .map(|(e, u)| {
                            let (_, bv, bh) = b.at(*u);
                            e - if pick == 1 { bv } else { bh }
                        })
                        .collect(),
                    None => est.clone(),
                };
                error_histogram(&est, truth, sr.dt(), cutoff, bin_width)
            })
            .collect::<Result<Vec<_>>>()?;
        let h = ErrorHistogram::merge(&parts)?;
        let _ = writeln!(s, "\n[error_histogram {name}]");
        let _ = writeln!(s, "bias {:.6e} std {:.6e} samples {}", h.bias, h.std, h.samples);
        let _ = writeln!(s, "centre count");
        for (c, k) in &h.bins {
            let _ = writeln!(s, "{c:.6e} {k}");
        }
    }

    let _ = writeln!(s, "\n[segments]");
    let _ = writeln!(
        s,
        "case index t0 t1 m_tower_fa m_oop m_hub_tilt thrust u_mean i_eff delta_mean delta_std \
         u_mean_est delta_mean_est delta_std_est mean_power derated_fraction"
    );
    for r in &ok {
        for g in &r.segments {
            let _ = writeln!(
                s,
                "{} {} {:.1} {:.1} {:.6e} {:.6e} {:.6e} {:.6e} {:.4} {:.5} {:.6e} {:.6e} {:.4} {:.6e} {:.6e} {:.6e} {:.4}",
                r.case.id(),
                g.index,
                g.t0,
                g.t1,
                g.m_tower_fa,
                g.m_oop,
                g.m_hub_tilt,
                g.thrust,
                g.truth.u_mean,
                g.truth.i_eff,
                g.truth.delta_mean,
                g.truth.delta_std,
                g.estimate.u_mean,
                g.estimate.delta_mean,
                g.estimate.delta_std,
                g.mean_power,
                g.derated_fraction
            );
        }
    }
    Ok(s)
}

/// One line per case, fixed formatting; identical inputs give identical bytes.
pub fn summary_table(results: &[CaseResult]) -> String {
    let mut s = String::from(
        "case status field_seed config_hash mean_power derated_fraction m_tower_fa m_oop m_hub_tilt degenerate\n",
    );
    for r in results {
        let m = &r.summary;
        let _ = writeln!(
            s,
            "{} {} {:016x} {} {:.6e} {:.6} {:.6e} {:.6e} {:.6e} {}",
            r.case.id(),
            if r.is_ok() { "ok" } else { "failed" },
            r.field_seed,
            r.config_hash,
            m.mean_power,
            m.derated_fraction,
            m.m_tower_fa,
            m.m_oop,
            m.m_hub_tilt,
            m.degenerate_samples
        );
    }
    s
}

/// Baseline runs, calibration, TLAC runs and comparison.
#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub baseline: Vec<CaseResult>,
    pub calibration: Calibration,
    pub tlac: Vec<CaseResult>,
    pub report: ComparisonReport,
}

impl CampaignOutcome {
    pub fn failed(&self) -> Vec<String> {
        let mut f = partition_failed(&self.baseline).1;
        f.extend(partition_failed(&self.tlac).1);
        f
    }

    pub fn summary_table(&self) -> String {
        let mut all = self.baseline.clone();
        all.extend(self.tlac.iter().cloned());
        summary_table(&all)
    }
}

/// The full pipeline over the matrix of `ctx.campaign`. The baseline runs use
/// a zero bias table so that their estimates can calibrate the estimator.
pub fn run_full_campaign(ctx: &RunContext, out: Option<&Path>) -> Result<CampaignOutcome> {
    let cases = super::case::build_matrix(&ctx.campaign)?;
    let mut base_ctx = ctx.clone();
    base_ctx.estimator.bias = BiasTable::zero(&ctx.campaign.winds);
    let baseline = run_campaign(&cases, &base_ctx, out.map(|o| o.join("baseline")).as_deref())?;
    let calibration = calibrate_campaign(&baseline, &ctx.campaign.winds, ctx.controller.tlac.short_window)?;
    let tlac_ctx = calibration.apply(&base_ctx);
    let tlac_cases: Vec<DlcCase> = cases.iter().map(|c| c.with_variant(Variant::Tlac)).collect();
    let tlac = run_campaign(&tlac_cases, &tlac_ctx, out.map(|o| o.join("tlac")).as_deref())?;
    let report = compare(&baseline, &tlac)?;
    let outcome = CampaignOutcome {
        baseline,
        calibration,
        tlac,
        report,
    };
    if let Some(dir) = out {
        super::write_atomic(&dir.join("summary.txt"), outcome.summary_table().as_bytes())?;
        super::write_atomic(&dir.join("comparison.txt"), outcome.report.to_text().as_bytes())?;
        super::write_atomic(&dir.join("bias.toml"), outcome.calibration.bias.to_toml().as_bytes())?;
        super::write_atomic(&dir.join("controller.toml"), tlac_ctx.controller.to_toml().as_bytes())?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{segment_stats, CaseSeries};
    use crate::harness::run::{CaseStatus, CaseSummary};

    fn fake(model: TurbulenceModel, wind: f64, seed: usize, variant: Variant, scale: f64) -> CaseResult {
        let mut s = CaseSeries::default();
        for k in 0..2000 {
            let t = 100.0 + k as f64 * 0.1;
            let ph = (k as f64 * 0.37 + seed as f64).sin();
            let mut row = vec![0.0; CaseSeries::COLUMNS.len()];
            row[0] = t;
            row[1] = wind + ph;
            row[4] = 0.01 + 0.002 * ph;
            for (i, name) in CaseSeries::COLUMNS.iter().enumerate() {
                match *name {
                    "u_eff_est" | "u_eff_raw" => row[i] = wind + ph + 0.1,
                    "delta_est" | "delta_v_est" => row[i] = 0.01 + 0.002 * ph,
                    "m_tower_fa" | "m_oop1" | "m_hub_tilt" => row[i] = scale * (1.0 + ph),
                    "power" => row[i] = 1e7 * scale,
                    "p_sp" => row[i] = 1.0,
                    _ => {}
                }
            }
            s.push_row(&row);
        }
        let case = DlcCase {
            model,
            mean_wind: wind,
            seed_index: seed,
            direction: 0.0,
            duration: 300.0,
            discard: 100.0,
            variant,
        };
        CaseResult {
            field_seed: case.field_seed(1),
            case,
            config_hash: "x".into(),
            status: CaseStatus::Ok,
            summary: CaseSummary {
                mean_power: 1e7 * scale,
                ..Default::default()
            },
            segments: segment_stats(&s, 100.0).unwrap(),
            series: s,
            wall_time: 0.0,
        }
    }

    fn set(variant: Variant, scale: f64) -> Vec<CaseResult> {
        let mut v = Vec::new();
        for m in [TurbulenceModel::Ntm, TurbulenceModel::Etm] {
            for w in [10.0, 12.0] {
                for seed in 1..=3 {
                    v.push(fake(m, w, seed, variant, scale));
                }
            }
        }
        v
    }

    #[test]
    fn baseline_against_itself() {
        let b = set(Variant::Baseline, 1.0);
        let r = compare(&b, &b).unwrap();
        assert_eq!(r.ntm_power_ratio, 1.0);
        for c in &r.channels {
            assert_eq!(c.baseline.values, c.tlac.values);
            assert_eq!(c.max_ratio(), 1.0);
        }
    }

    #[test]
    fn mismatched_matrices_abort() {
        let b = set(Variant::Baseline, 1.0);
        let t = set(Variant::Tlac, 0.9);
        assert!(matches!(compare(&b, &t[1..]), Err(Error::MismatchedMatrices(_))));
        let r = compare(&b, &t).unwrap();
        assert!((r.ntm_power_ratio - 0.9).abs() < 1e-12);
        assert!(r.channel(TurbulenceModel::Etm, "m_oop").unwrap().tail_at_or_below(3));
    }

    #[test]
    fn failed_cases_are_excluded() {
        let b = set(Variant::Baseline, 1.0);
        let mut t = set(Variant::Tlac, 1.0);
        t[0].status = CaseStatus::Failed { detail: "nan".into() };
        t[0].summary.mean_power = f64::NAN;
        let r = compare(&b, &t).unwrap();
        assert_eq!(r.excluded, vec![b[0].case.wind_id()]);
        assert!(r.ntm_power_ratio.is_finite());
    }

    #[test]
    fn calibration_needs_every_ntm_wind() {
        let b = set(Variant::Baseline, 1.0);
        match calibrate_campaign(&b, &[10.0, 12.0, 14.0], 60.0) {
            Err(Error::InsufficientCases(missing)) => assert_eq!(missing, vec!["ntm 14.0 m/s baseline"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(calibrate_campaign(&[], &[10.0], 60.0), Err(Error::InsufficientCases(_))));
    }

    #[test]
    fn calibration_removes_offset_and_ignores_duplication() {
        let b = set(Variant::Baseline, 1.0);
        let c = calibrate_campaign(&b, &[10.0, 12.0], 60.0).unwrap();
        assert!((c.bias.at(10.0).0 - 0.1).abs() < 1e-9);
        let doubled: Vec<CaseResult> = b.iter().chain(&b).cloned().collect();
        let d = calibrate_campaign(&doubled, &[10.0, 12.0], 60.0).unwrap();
        // interpolating quantiles move within the same order-statistic gap
        // when every sample is duplicated, so only approximate equality holds
        for (x, y) in c.thresholds.bins.iter().zip(&d.thresholds.bins) {
            assert!((x.delta_avg / y.delta_avg - 1.0).abs() < 0.05);
            assert!((x.delta_std / y.delta_std - 1.0).abs() < 0.05);
        }
    }
}
