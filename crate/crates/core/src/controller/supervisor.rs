//! Baseline loop with the optional load-alleviation layer.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::baseline::{BaselineConfig, BaselineController, Measurements};
use super::command::{ControlCommand, ControlMode};
use super::tlac::{apply_derate, TlacConfig, TlacLayer, TlacOutput};
use crate::estimator::WindEstimate;
use crate::turbine::TurbineParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    pub baseline: BaselineConfig,
    pub tlac: TlacConfig,
}

impl ControllerConfig {
    pub fn for_turbine(p: &TurbineParams) -> Self {
        Self {
            baseline: BaselineConfig::for_turbine(p),
            tlac: TlacConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("controller config: {e}")))?;
        c.baseline.validate()?;
        c.tlac.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("controller config serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone)]
pub struct Controller {
    baseline: BaselineController,
    tlac: Option<TlacLayer>,
    last: TlacOutput,
}

impl Controller {
    /// `with_tlac = false` runs the baseline alone.
    pub fn new(config: &ControllerConfig, with_tlac: bool) -> Result<Self> {
        Ok(Self {
            baseline: BaselineController::new(config.baseline.clone())?,
            tlac: if with_tlac { Some(TlacLayer::new(config.tlac.clone())?) } else { None },
            last: TlacOutput {
                p_sp: 1.0,
                p_target: 1.0,
                mode: ControlMode::Normal,
                gain_scale: 1.0,
            },
        })
    }

    pub fn initialise(&mut self, pitch: f64) {
        self.baseline.initialise(pitch);
    }

    pub fn tlac_state(&self) -> &TlacOutput {
        &self.last
    }

    pub fn step(&mut self, t: f64, m: &Measurements, estimate: Option<&WindEstimate>, dt: f64) -> ControlCommand {
        let rated = self.baseline.rated_setpoints();
        let (setpoints, gain_scale) = match (&mut self.tlac, estimate) {
            (Some(layer), Some(e)) => {
                self.last = layer.step(t, e.u_eff, e.delta);
                (apply_derate(self.last.p_sp, &rated, layer.config.strategy), self.last.gain_scale)
            }
            (Some(layer), None) => (apply_derate(self.last.p_sp, &rated, layer.config.strategy), self.last.gain_scale),
            (None, _) => (rated, 1.0),
        };
        let mut cmd = self.baseline.step(m, &setpoints, gain_scale, dt);
        cmd.p_sp = self.last.p_sp;
        cmd.mode = self.last.mode;
        cmd
    }
}
