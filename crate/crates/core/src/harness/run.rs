//! Closed-loop simulation of one load case.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::case::{CampaignConfig, DlcCase, Variant};
use crate::analysis::{segment_stats, signed_extreme, CaseSeries, SegmentRow};
use crate::controller::{steady_state, Controller, ControllerConfig, Measurements};
use crate::estimator::{EstimatorConfig, WindEstimator};
use crate::turbine::{BladeInflowModel, CoefficientSurface, Turbine, TurbineParams};
use crate::windfield::{load_or_synthesize, synthesize, GridSpec, TurbulenceSpec, WindField};
use crate::{Error, Result};

/// Segment length for per-case statistics, s.
pub const SEGMENT_LENGTH: f64 = 100.0;

/// Everything a case needs besides its own description.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub campaign: CampaignConfig,
    pub params: TurbineParams,
    pub surfaces: CoefficientSurface,
    pub controller: ControllerConfig,
    pub estimator: EstimatorConfig,
    pub inflow_model: BladeInflowModel,
    pub field_cache: Option<PathBuf>,
}

impl RunContext {
    pub fn new(campaign: CampaignConfig) -> Self {
        let params = TurbineParams::default();
        Self {
            controller: ControllerConfig::for_turbine(&params),
            estimator: EstimatorConfig {
                dt: campaign.control_dt,
                ..Default::default()
            },
            campaign,
            params,
            surfaces: CoefficientSurface::shipped(),
            inflow_model: BladeInflowModel::default(),
            field_cache: None,
        }
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            ny: self.campaign.grid_points,
            nz: self.campaign.grid_points,
            ..GridSpec::rotor_default(self.params.rotor_radius, self.params.hub_height)
        }
    }

    pub fn turbulence(&self, case: &DlcCase) -> TurbulenceSpec {
        TurbulenceSpec {
            i_ref: self.campaign.i_ref,
            shear_exponent: self.campaign.shear_exponent,
            direction: case.direction,
            ..TurbulenceSpec::class_a(case.model, case.mean_wind, case.field_seed(self.campaign.master_seed))
        }
    }

    pub fn field(&self, case: &DlcCase) -> Result<WindField> {
        let turb = self.turbulence(case);
        match &self.field_cache {
            Some(dir) => load_or_synthesize(dir, &self.grid(), &turb, self.campaign.field_dt, case.duration),
            None => synthesize(&self.grid(), &turb, self.campaign.field_dt, case.duration),
        }
    }

    /// Hash of every input that shapes a case result.
    pub fn config_hash(&self, case: &DlcCase) -> String {
        #[derive(Serialize)]
        struct Inputs<'a> {
            case: &'a DlcCase,
            campaign: &'a CampaignConfig,
            params: &'a TurbineParams,
            controller: &'a ControllerConfig,
            estimator: &'a EstimatorConfig,
            inflow_model: BladeInflowModel,
            surfaces: String,
        }
        let surfaces = hex::encode(Sha256::digest(self.surfaces.to_text().as_bytes()));
        let json = serde_json::to_vec(&Inputs {
            case,
            campaign: &self.campaign,
            params: &self.params,
            controller: &self.controller,
            estimator: &self.estimator,
            inflow_model: self.inflow_model,
            surfaces,
        })
        .expect("inputs serialise");
        hex::encode(&Sha256::digest(json)[..8])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CaseStatus {
    Ok,
    Failed { detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CaseSummary {
    /// Mean electrical power over the scored window, W.
    pub mean_power: f64,
    /// Share of scored samples with `p_sp < 1`.
    pub derated_fraction: f64,
    pub m_tower_fa: f64,
    pub m_oop: f64,
    pub m_hub_tilt: f64,
    pub degenerate_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: DlcCase,
    pub field_seed: u64,
    pub config_hash: String,
    #[serde(flatten)]
    pub status: CaseStatus,
    pub summary: CaseSummary,
    pub segments: Vec<SegmentRow>,
    /// Scored part of the run (after the discarded transient).
    #[serde(skip)]
    pub series: CaseSeries,
    /// Excluded from the persisted summary so reruns compare equal.
    #[serde(skip)]
    pub wall_time: f64,
}

impl CaseResult {
    pub fn is_ok(&self) -> bool {
        self.status == CaseStatus::Ok
    }
}

/// Simulate `case`; numerical failures are reported in the result, not as errors.
pub fn run_case(case: &DlcCase, ctx: &RunContext) -> Result<CaseResult> {
    let start = Instant::now();
    let field = ctx.field(case)?;
    let mut result = CaseResult {
        case: case.clone(),
        field_seed: case.field_seed(ctx.campaign.master_seed),
        config_hash: ctx.config_hash(case),
        status: CaseStatus::Ok,
        summary: CaseSummary::default(),
        segments: Vec::new(),
        series: CaseSeries::default(),
        wall_time: 0.0,
    };
    match simulate(case, ctx, &field) {
        Ok(series) => {
            let scored = series.since(case.discard);
            result.segments = segment_stats(&scored, SEGMENT_LENGTH)?;
            result.summary = summarise(&scored);
            result.series = scored;
        }
        Err(Error::NonFinite { time, detail }) => {
            result.status = CaseStatus::Failed {
                detail: format!("non-finite state at t = {time:.2} s: {detail}"),
            };
        }
        Err(e) => return Err(e),
    }
    result.wall_time = start.elapsed().as_secs_f64();
    Ok(result)
}

fn summarise(s: &CaseSeries) -> CaseSummary {
    let n = s.len().max(1) as f64;
    let oop = [signed_extreme(&s.m_oop1), signed_extreme(&s.m_oop2), signed_extreme(&s.m_oop3)];
    CaseSummary {
        mean_power: s.power.iter().sum::<f64>() / n,
        derated_fraction: s.p_sp.iter().filter(|&&p| p < 1.0).count() as f64 / n,
        m_tower_fa: signed_extreme(&s.m_tower_fa),
        m_oop: signed_extreme(&oop),
        m_hub_tilt: signed_extreme(&s.m_hub_tilt),
        degenerate_samples: s.degenerate.iter().filter(|&&d| d > 0.0).count(),
    }
}

/// Full-length closed-loop series sampled at the control interval.
pub fn simulate(case: &DlcCase, ctx: &RunContext, field: &WindField) -> Result<CaseSeries> {
    let c = &ctx.campaign;
    let turbine = Turbine::new(ctx.params.clone(), &ctx.surfaces, field, ctx.inflow_model)?;
    let mut estimator = WindEstimator::new(&ctx.params, &ctx.surfaces, ctx.estimator.clone())?;
    let mut controller = Controller::new(&ctx.controller, case.variant == Variant::Tlac)?;
    let truth = turbine.inflow().truth();

    let mut state = steady_state(&ctx.params, &ctx.surfaces, &ctx.controller.baseline, truth.at(0.0).0);
    controller.initialise(state.pitch);
    let sub = (c.control_dt / c.turbine_dt).round() as usize;
    let n_control = (case.duration / c.control_dt).round() as usize;
    let baseline = &ctx.controller.baseline;

    let mut series = CaseSeries::default();
    for k in 0..n_control {
        let t = k as f64 * c.control_dt;
        state.time = t;
        let loads = turbine.loads(&state);
        let est = estimator.step(t, loads.m_oop, state.azimuth, state.pitch, state.rotor_speed);
        let power = baseline.electrical_power(state.gen_torque, state.rotor_speed);
        let meas = Measurements {
            rotor_speed: state.rotor_speed,
            pitch: state.pitch,
            power,
        };
        let command = controller.step(t, &meas, Some(&est.filtered), c.control_dt);
        let (u, dh, dv) = truth.at(t);
        let f = est.filtered;
        series.push_row(&[
            t,
            u,
            dh,
            dv,
            dh.hypot(dv),
            est.raw.u_eff,
            est.raw.delta_v,
            est.raw.delta_h,
            f.u_eff,
            f.delta_v,
            f.delta_h,
            f.delta,
            state.rotor_speed,
            state.pitch,
            state.gen_torque,
            power,
            loads.thrust,
            loads.m_oop[0],
            loads.m_oop[1],
            loads.m_oop[2],
            loads.m_tower_fa,
            loads.m_hub_tilt,
            command.p_sp,
            f64::from(command.mode.code()),
            f64::from(u8::from(f.degenerate || loads.degenerate)),
        ]);
        for _ in 0..sub {
            state = turbine.step(&state, &command, c.turbine_dt)?.0;
        }
    }
    Ok(series)
}
