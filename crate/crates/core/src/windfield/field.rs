use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::{Error, Result};

/// IEC turbulence model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurbulenceModel {
    Ntm,
    Etm,
}

impl TurbulenceModel {
    pub fn as_str(self) -> &'static str {
        match self {
            TurbulenceModel::Ntm => "ntm",
            TurbulenceModel::Etm => "etm",
        }
    }
}

impl std::fmt::Display for TurbulenceModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TurbulenceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ntm" => Ok(TurbulenceModel::Ntm),
            "etm" => Ok(TurbulenceModel::Etm),
            other => Err(Error::InvalidArgument(format!("unknown turbulence model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceSpec {
    pub model: TurbulenceModel,
    /// Hub-height mean wind speed, m/s.
    pub mean_wind: f64,
    /// Reference turbulence intensity (class A: 0.16).
    pub i_ref: f64,
    /// Reference wind speed of the turbine class, m/s.
    pub v_ref: f64,
    /// Power-law shear exponent.
    pub shear_exponent: f64,
    /// Horizontal flow angle, deg.
    pub direction: f64,
    pub seed: u64,
}

impl TurbulenceSpec {
    /// Class A turbulence, class I reference speed, IEC normal wind profile.
    pub fn class_a(model: TurbulenceModel, mean_wind: f64, seed: u64) -> Self {
        Self {
            model,
            mean_wind,
            i_ref: 0.16,
            v_ref: 50.0,
            shear_exponent: 0.2,
            direction: 0.0,
            seed,
        }
    }

    pub fn laminar(mean_wind: f64, shear_exponent: f64) -> Self {
        Self {
            model: TurbulenceModel::Ntm,
            mean_wind,
            i_ref: 0.0,
            v_ref: 50.0,
            shear_exponent,
            direction: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean_wind > 0.0) {
            return Err(Error::InvalidTurbulence(format!(
                "mean wind {} m/s must be positive",
                self.mean_wind
            )));
        }
        // i_ref = 0 is admitted as the laminar limit
        if !(0.0..1.0).contains(&self.i_ref) {
            return Err(Error::InvalidTurbulence(format!("i_ref {} outside [0, 1)", self.i_ref)));
        }
        if !(-180.0..=180.0).contains(&self.direction) {
            return Err(Error::InvalidTurbulence(format!(
                "direction {} deg outside [-180, 180]",
                self.direction
            )));
        }
        if !(self.v_ref > 0.0) || !self.shear_exponent.is_finite() {
            return Err(Error::InvalidTurbulence("v_ref must be positive and shear finite".into()));
        }
        Ok(())
    }
}

/// Longitudinal turbulence standard deviation of the IEC NTM/ETM models, m/s.
pub fn sigma_target(spec: &TurbulenceSpec) -> f64 {
    match spec.model {
        TurbulenceModel::Ntm => spec.i_ref * (0.75 * spec.mean_wind + 5.6),
        TurbulenceModel::Etm => {
            let c = 2.0;
            let v_ave = 0.2 * spec.v_ref;
            c * spec.i_ref * (0.072 * (v_ave / c + 3.0) * (spec.mean_wind / c - 4.0) + 10.0)
        }
    }
}

/// Gridded three-component wind time history in the turbine (U, V, W) frame.
///
/// Series are stored point-major: `u[point * n_steps + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindField {
    pub grid: GridSpec,
    pub turbulence: TurbulenceSpec,
    pub dt: f64,
    pub n_steps: usize,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl WindField {
    /// Field defined pointwise by `f(dy, dz, t)` for the u component; v and w are zero.
    pub fn from_fn<F>(grid: GridSpec, turbulence: TurbulenceSpec, dt: f64, duration: f64, f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        grid.validate()?;
        let n_steps = steps_for(dt, duration)?;
        let offsets = grid.offsets();
        let mut u = Vec::with_capacity(offsets.len() * n_steps);
        for &(dy, dz) in &offsets {
            u.extend((0..n_steps).map(|k| f(dy, dz, k as f64 * dt)));
        }
        let zeros = vec![0.0; u.len()];
        Ok(Self {
            grid,
            turbulence,
            dt,
            n_steps,
            u,
            v: zeros.clone(),
            w: zeros,
        })
    }

    pub fn duration(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    pub fn u_series(&self, point: usize) -> &[f64] {
        &self.u[point * self.n_steps..(point + 1) * self.n_steps]
    }

    pub fn v_series(&self, point: usize) -> &[f64] {
        &self.v[point * self.n_steps..(point + 1) * self.n_steps]
    }

    pub fn w_series(&self, point: usize) -> &[f64] {
        &self.w[point * self.n_steps..(point + 1) * self.n_steps]
    }

    /// Linear-interpolation position in the sample axis, clamped to the record.
    pub(crate) fn time_stencil(&self, t: f64) -> (usize, usize, f64) {
        let pos = (t / self.dt).clamp(0.0, (self.n_steps - 1) as f64);
        let k0 = (pos.floor() as usize).min(self.n_steps - 1);
        let k1 = (k0 + 1).min(self.n_steps - 1);
        (k0, k1, pos - k0 as f64)
    }

    /// u at grid point `point` and time `t`, linear in time.
    pub fn u_at(&self, point: usize, t: f64) -> f64 {
        let (k0, k1, a) = self.time_stencil(t);
        let s = self.u_series(point);
        s[k0] + a * (s[k1] - s[k0])
    }

    /// u at an arbitrary rotor-plane offset, bilinear in space and linear in time.
    pub fn sample_u(&self, t: f64, dy: f64, dz: f64) -> f64 {
        let (k0, k1, a) = self.time_stencil(t);
        self.grid
            .stencil(dy, dz)
            .iter()
            .map(|&(i, wgt)| {
                let s = self.u_series(i);
                wgt * (s[k0] + a * (s[k1] - s[k0]))
            })
            .sum()
    }
}

pub(crate) fn steps_for(dt: f64, duration: f64) -> Result<usize> {
    if !(dt > 0.0) || !(duration > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time step {dt} s and duration {duration} s must be positive"
        )));
    }
    let n = (duration / dt).round() as usize;
    if n < 2 {
        return Err(Error::InvalidArgument("field needs at least two samples".into()));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_target_matches_iec_formulas() {
        let ntm = TurbulenceSpec::class_a(TurbulenceModel::Ntm, 12.0, 1);
        assert!((sigma_target(&ntm) - 2.336).abs() < 1e-12);
        let etm = TurbulenceSpec::class_a(TurbulenceModel::Etm, 12.0, 1);
        assert!((sigma_target(&etm) - 3.56864).abs() < 1e-12);
        let mut laminar = ntm;
        laminar.i_ref = 0.0;
        assert_eq!(sigma_target(&laminar), 0.0);
    }

    #[test]
    fn spec_validation() {
        let mut s = TurbulenceSpec::class_a(TurbulenceModel::Etm, 12.0, 1);
        s.validate().unwrap();
        s.direction = 200.0;
        assert!(s.validate().is_err());
        s.direction = 0.0;
        s.mean_wind = 0.0;
        assert!(s.validate().is_err());
        s.mean_wind = 10.0;
        s.i_ref = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn model_parses_case_insensitively() {
        assert_eq!("ETM".parse::<TurbulenceModel>().unwrap(), TurbulenceModel::Etm);
        assert!("xtm".parse::<TurbulenceModel>().is_err());
    }
}
