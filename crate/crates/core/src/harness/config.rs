//! Run configuration file.
//!
//! TOML with optional `[campaign]`, `[controller]`, `[estimator]` and
//! `inflow_model` entries; missing sections take the defaults. The effective
//! configuration of a batch is written back as `config.toml`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::case::CampaignConfig;
use super::run::RunContext;
use crate::controller::ControllerConfig;
use crate::estimator::EstimatorConfig;
use crate::turbine::BladeInflowModel;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub inflow_model: Option<BladeInflowModel>,
    #[serde(default)]
    pub campaign: Option<CampaignConfig>,
    #[serde(default)]
    pub controller: Option<ControllerConfig>,
    #[serde(default)]
    pub estimator: Option<EstimatorConfig>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("run config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?).map_err(|e| Error::Parse {
            path: path.into(),
            detail: e.to_string(),
        })
    }

    /// Context with `default_campaign` unless the file sets one.
    pub fn context(&self, default_campaign: CampaignConfig) -> Result<RunContext> {
        let mut ctx = RunContext::new(self.campaign.clone().unwrap_or(default_campaign));
        if let Some(c) = &self.controller {
            c.baseline.validate()?;
            c.tlac.validate()?;
            ctx.controller = c.clone();
        }
        if let Some(e) = &self.estimator {
            e.validate()?;
            ctx.estimator = e.clone();
        }
        if let Some(m) = self.inflow_model {
            ctx.inflow_model = m;
        }
        ctx.campaign.validate()?;
        Ok(ctx)
    }

    /// Fully populated configuration of `ctx`.
    pub fn from_context(ctx: &RunContext) -> Self {
        Self {
            inflow_model: Some(ctx.inflow_model),
            campaign: Some(ctx.campaign.clone()),
            controller: Some(ctx.controller.clone()),
            estimator: Some(ctx.estimator.clone()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let ctx = RunConfig::from_toml("").unwrap().context(CampaignConfig::desk()).unwrap();
        assert_eq!(ctx.campaign, CampaignConfig::desk());
        assert_eq!(ctx.inflow_model, BladeInflowModel::SpanSampled);
    }

    #[test]
    fn round_trip_of_effective_config() {
        let mut ctx = RunContext::new(CampaignConfig::full());
        ctx.controller.tlac.p_lim = 0.7;
        ctx.inflow_model = BladeInflowModel::Composed;
        let text = RunConfig::from_context(&ctx).to_toml();
        let back = RunConfig::from_toml(&text).unwrap().context(CampaignConfig::desk()).unwrap();
        assert_eq!(back.campaign, ctx.campaign);
        assert_eq!(back.controller, ctx.controller);
        assert_eq!(back.estimator, ctx.estimator);
        assert_eq!(back.inflow_model, BladeInflowModel::Composed);
    }

    #[test]
    fn unknown_model_is_rejected() {
        assert!(RunConfig::from_toml("inflow_model = \"lidar\"").is_err());
    }
}
