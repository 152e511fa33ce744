//! Sample-by-sample estimator: inversion, transform, filtering and bias removal.

use serde::{Deserialize, Serialize};

use super::calibration::BiasTable;
use super::filter::LowPass;
use super::inversion::{audit_monotone, invert_blade_wind, WIND_BRACKET};
use super::transform::nonrotating_transform;
use crate::turbine::{blade_moment, CoefficientSurface, TurbineParams, DEFAULT_R_EQ};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub r_eq: f64,
    /// Hz
    pub cutoff: f64,
    pub damping: f64,
    /// Sample interval, s.
    pub dt: f64,
    pub bias: BiasTable,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            r_eq: DEFAULT_R_EQ,
            cutoff: 0.08,
            damping: 0.7,
            dt: 0.1,
            bias: BiasTable::default(),
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_eq > 0.0) {
            return Err(Error::InvalidArgument(format!("r_eq {} must be positive", self.r_eq)));
        }
        LowPass::new(self.cutoff, self.damping, self.dt).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WindEstimate {
    pub time: f64,
    pub u_eff: f64,
    pub delta_v: f64,
    pub delta_h: f64,
    pub delta: f64,
    pub degenerate: bool,
}

impl WindEstimate {
    fn new(time: f64, u_eff: f64, delta_v: f64, delta_h: f64, degenerate: bool) -> Self {
        Self {
            time,
            u_eff,
            delta_v,
            delta_h,
            delta: delta_v.hypot(delta_h),
            degenerate,
        }
    }
}

/// Unfiltered and filtered-calibrated estimates of one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOutput {
    pub raw: WindEstimate,
    pub filtered: WindEstimate,
}

#[derive(Debug, Clone)]
pub struct WindEstimator<'a> {
    params: TurbineParams,
    surfaces: &'a CoefficientSurface,
    config: EstimatorConfig,
    filters: [LowPass; 3],
    last_blade: [Option<f64>; 3],
}

impl<'a> WindEstimator<'a> {
    /// Builds the estimator after checking that the table can be inverted.
    pub fn new(params: &TurbineParams, surfaces: &'a CoefficientSurface, config: EstimatorConfig) -> Result<Self> {
        config.validate()?;
        let params = TurbineParams {
            r_eq: config.r_eq,
            gravity: None,
            ..params.clone()
        };
        audit_monotone(&params, surfaces)?;
        let lp = LowPass::new(config.cutoff, config.damping, config.dt)?;
        Ok(Self {
            params,
            surfaces,
            config,
            filters: [lp.clone(), lp.clone(), lp],
            last_blade: [None; 3],
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    /// Blade winds from the root moments; degenerate blades hold their last value.
    pub fn blade_winds(&mut self, m_oop: [f64; 3], pitch: f64, rotor_speed: f64) -> ([f64; 3], bool) {
        let mut degenerate = false;
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = match invert_blade_wind(m_oop[i], pitch, rotor_speed, &self.params, self.surfaces) {
                Some(u) => {
                    self.last_blade[i] = Some(u);
                    u
                }
                None => {
                    degenerate = true;
                    self.last_blade[i].unwrap_or_else(|| {
                        let low = blade_moment(&self.params, self.surfaces, pitch, rotor_speed.max(1e-3), WIND_BRACKET.0);
                        if m_oop[i] <= low { WIND_BRACKET.0 } else { WIND_BRACKET.1 }
                    })
                }
            };
        }
        (out, degenerate)
    }

    pub fn step(&mut self, time: f64, m_oop: [f64; 3], azimuth: f64, pitch: f64, rotor_speed: f64) -> EstimatorOutput {
        let (ub, degenerate) = self.blade_winds(m_oop, pitch, rotor_speed);
        let (u, dv, dh) = nonrotating_transform(ub, azimuth, self.config.r_eq);
        let raw = WindEstimate::new(time, u, dv, dh, degenerate);
        let fu = self.filters[0].step(u);
        let fv = self.filters[1].step(dv);
        let fh = self.filters[2].step(dh);
        let (bu, bv, bh) = self.config.bias.at(fu);
        EstimatorOutput {
            raw,
            filtered: WindEstimate::new(time, fu - bu, fv - bv, fh - bh, degenerate),
        }
    }
}
