//! End-to-end behaviour of single cases: determinism, persistence and TLAC activity.

use tlac::harness::{load_case, run_case, save_case, simulate, CampaignConfig, DlcCase, RunContext, Variant};
use tlac::windfield::{TurbulenceModel, TurbulenceSpec, WindField};

fn case(model: TurbulenceModel, wind: f64, variant: Variant) -> DlcCase {
    DlcCase {
        model,
        mean_wind: wind,
        seed_index: 1,
        direction: 0.0,
        duration: 300.0,
        discard: 100.0,
        variant,
    }
}

#[test]
fn identical_case_twice_is_bit_identical() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let c = case(TurbulenceModel::Ntm, 12.0, Variant::Tlac);
    let a = run_case(&c, &ctx).unwrap();
    let b = run_case(&c, &ctx).unwrap();
    assert_eq!(a.series, b.series);
    assert_eq!(a.segments, b.segments);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn variants_see_the_same_wind() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let b = run_case(&case(TurbulenceModel::Etm, 14.0, Variant::Baseline), &ctx).unwrap();
    let t = run_case(&case(TurbulenceModel::Etm, 14.0, Variant::Tlac), &ctx).unwrap();
    assert_eq!(b.field_seed, t.field_seed);
    assert_eq!(b.series.u_eff_true, t.series.u_eff_true);
    assert_eq!(b.series.delta_true, t.series.delta_true);
    assert_ne!(b.config_hash, t.config_hash);
}

#[test]
fn laminar_tlac_run_holds_power_without_triggers() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let field = WindField::from_fn(ctx.grid(), TurbulenceSpec::laminar(14.0, 0.0), 0.2, 300.0, |_, _, _| 14.0).unwrap();
    let s = simulate(&case(TurbulenceModel::Ntm, 14.0, Variant::Tlac), &ctx, &field).unwrap().since(100.0);
    assert!(s.p_sp.iter().all(|&p| p == 1.0));
    let mean = s.power.iter().sum::<f64>() / s.len() as f64;
    assert!((mean / 10.0e6 - 1.0).abs() < 0.02, "{mean}");
}

#[test]
fn etm_case_with_tlac_derates() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let r = run_case(&case(TurbulenceModel::Etm, 14.0, Variant::Tlac), &ctx).unwrap();
    assert!(r.is_ok());
    assert!(r.summary.derated_fraction > 0.0);
    assert!(r.series.p_sp.iter().all(|&p| (0.8..=1.0).contains(&p)));
}

#[test]
fn scored_window_and_segments() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let r = run_case(&case(TurbulenceModel::Ntm, 10.0, Variant::Baseline), &ctx).unwrap();
    assert!((r.series.time[0] - 100.0).abs() < 1e-9);
    assert_eq!(r.series.len(), 2000);
    assert_eq!(r.segments.len(), 2);
}

#[test]
fn persisted_case_round_trips() {
    let ctx = RunContext::new(CampaignConfig::desk());
    let r = run_case(&case(TurbulenceModel::Ntm, 10.0, Variant::Baseline), &ctx).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = save_case(dir.path(), &r).unwrap();
    assert!(path.join("series.txt").exists() && path.join("meta.json").exists());
    let back = load_case(&path).unwrap();
    assert_eq!(back, r);
    // rewriting replaces the directory without leftovers
    save_case(dir.path(), &r).unwrap();
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}
