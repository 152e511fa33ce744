//! Campaign configuration and the load-case matrix.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::windfield::TurbulenceModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Baseline,
    Tlac,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::Tlac => "tlac",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" => Ok(Self::Baseline),
            "tlac" => Ok(Self::Tlac),
            _ => Err(Error::InvalidArgument(format!("unknown controller variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub models: Vec<TurbulenceModel>,
    /// m/s
    pub winds: Vec<f64>,
    /// Seeds per wind speed and model, numbered from 1.
    pub seeds: usize,
    /// deg; seed `i` uses `directions[(i - 1) % len]`.
    pub directions: Vec<f64>,
    /// s
    pub duration: f64,
    /// s
    pub discard: f64,
    pub master_seed: u64,
    /// Turbine integration step, s.
    pub turbine_dt: f64,
    /// Controller and estimator interval, s.
    pub control_dt: f64,
    /// Wind field sample interval, s.
    pub field_dt: f64,
    /// Grid points per axis.
    pub grid_points: usize,
    pub i_ref: f64,
    pub shear_exponent: f64,
}

impl CampaignConfig {
    /// Reduced campaign: 300 s cases, 3 seeds.
    pub fn desk() -> Self {
        Self {
            models: vec![TurbulenceModel::Ntm, TurbulenceModel::Etm],
            winds: vec![10.0, 12.0, 14.0],
            seeds: 3,
            directions: vec![-8.0, 0.0, 8.0],
            duration: 300.0,
            discard: 100.0,
            master_seed: 2024,
            turbine_dt: 0.02,
            control_dt: 0.1,
            field_dt: 0.2,
            grid_points: 15,
            i_ref: 0.16,
            shear_exponent: 0.2,
        }
    }

    /// 700 s cases, 6 seeds: 36 wind cases.
    pub fn full() -> Self {
        Self {
            seeds: 6,
            duration: 700.0,
            ..Self::desk()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() || self.winds.is_empty() || self.seeds == 0 || self.directions.is_empty() {
            return Err(Error::InvalidArgument("campaign needs models, winds, seeds and directions".into()));
        }
        if !(self.discard >= 0.0 && self.duration > self.discard) {
            return Err(Error::InvalidArgument("duration must exceed the discarded transient".into()));
        }
        let ratio = self.control_dt / self.turbine_dt;
        if !(self.turbine_dt > 0.0) || (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
            return Err(Error::InvalidArgument(
                "control interval must be a whole multiple of the turbine step".into(),
            ));
        }
        Ok(())
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("campaign config serialises");
        hex::encode(&Sha256::digest(json)[..8])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DlcCase {
    pub model: TurbulenceModel,
    pub mean_wind: f64,
    pub seed_index: usize,
    pub direction: f64,
    pub duration: f64,
    pub discard: f64,
    pub variant: Variant,
}

impl DlcCase {
    /// Identifier of the wind realisation, shared by both variants.
    pub fn wind_id(&self) -> String {
        format!(
            "{}_{:04.1}_s{}_d{:+.0}",
            self.model.as_str(),
            self.mean_wind,
            self.seed_index,
            self.direction
        )
    }

    pub fn id(&self) -> String {
        format!("{}_{}", self.wind_id(), self.variant)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }

    /// Field seed from the wind id and master seed.
    pub fn field_seed(&self, master_seed: u64) -> u64 {
        let mut h = Sha256::new();
        h.update(self.wind_id().as_bytes());
        h.update(master_seed.to_le_bytes());
        let d = h.finalize();
        u64::from_le_bytes(d[..8].try_into().unwrap())
    }
}

/// Wind cases in stable order (model, wind, seed), all with the baseline variant.
pub fn build_matrix(cfg: &CampaignConfig) -> Result<Vec<DlcCase>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &model in &cfg.models {
        for &mean_wind in &cfg.winds {
            for seed_index in 1..=cfg.seeds {
                out.push(DlcCase {
                    model,
                    mean_wind,
                    seed_index,
                    direction: cfg.directions[(seed_index - 1) % cfg.directions.len()],
                    duration: cfg.duration,
                    discard: cfg.discard,
                    variant: Variant::Baseline,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_matrix_has_36_cases() {
        let m = build_matrix(&CampaignConfig::full()).unwrap();
        assert_eq!(m.len(), 36);
        assert_eq!(m.iter().filter(|c| c.model == TurbulenceModel::Etm).count(), 18);
        let ids: std::collections::BTreeSet<String> = m.iter().map(DlcCase::id).collect();
        assert_eq!(ids.len(), 36);
    }

    #[test]
    fn small_cross_product() {
        let cfg = CampaignConfig {
            winds: vec![12.0],
            seeds: 2,
            directions: vec![0.0],
            ..CampaignConfig::desk()
        };
        let m = build_matrix(&cfg).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m, build_matrix(&cfg).unwrap());
    }

    #[test]
    fn variants_share_the_field_seed() {
        let c = &build_matrix(&CampaignConfig::desk()).unwrap()[4];
        let t = c.with_variant(Variant::Tlac);
        assert_eq!(c.field_seed(7), t.field_seed(7));
        assert_ne!(c.field_seed(7), c.field_seed(8));
        assert_ne!(c.id(), t.id());
    }
}
