//! Quasi-steady rotor loads from the coefficient surfaces.
//!
//! Blade `i` sits at azimuth `phi_i = phi + 2 pi (i - 1) / 3`, clockwise seen
//! from upwind with `phi = 0` pointing up, so its span point at radius `r` is
//! at rotor-plane offset `(dy, dz) = (-r sin phi_i, r cos phi_i)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::params::TurbineParams;
use super::surfaces::{surrogate, CoefficientSurface};
use crate::windfield::{RotorWindTruth, WindField};
use crate::{Error, Result};

/// Blade wind speeds below this are treated as degenerate.
pub const MIN_BLADE_WIND: f64 = 0.5;

/// Span stations used for the distributed-load model.
pub const SPAN_STATIONS: usize = 25;

/// Azimuth of blade `i` (0-based), wrapped to `[0, 2 pi)`.
pub fn blade_azimuth(azimuth: f64, i: usize) -> f64 {
    (azimuth + TAU * i as f64 / 3.0).rem_euclid(TAU)
}

/// Blade-equivalent wind composed from the rotor average and linear shears
/// (`i` is 0-based).
pub fn blade_effective_wind(u_eff: f64, delta_h: f64, delta_v: f64, azimuth: f64, r_eq: f64, i: usize) -> f64 {
    let (s, c) = blade_azimuth(azimuth, i).sin_cos();
    u_eff - delta_h * r_eq * s + delta_v * r_eq * c
}

/// How the simulated blades see the wind field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BladeInflowModel {
    /// Blade wind composed from the fitted rotor average and shears.
    Composed,
    /// Load-weighted average of the local field along each blade span.
    #[default]
    SpanSampled,
}

/// Wind seen by the rotor at one instant, before tower motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorInflow {
    pub u_eff: f64,
    pub blade: [f64; 3],
}

/// Load channels of one turbine sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LoadChannels {
    pub thrust: f64,
    pub m_oop: [f64; 3],
    pub m_tower_fa: f64,
    pub m_hub_tilt: f64,
    pub aero_torque: f64,
    pub aero_power: f64,
    /// A blade wind fell to or below [`MIN_BLADE_WIND`] and was clamped.
    pub degenerate: bool,
}

/// Blade root out-of-plane thrust moment for one blade.
pub fn blade_moment(params: &TurbineParams, surfaces: &CoefficientSurface, pitch: f64, rotor_speed: f64, u: f64) -> f64 {
    let tsr = rotor_speed * params.rotor_radius / u;
    0.5 / params.n_blades as f64
        * surfaces.ct(pitch, tsr)
        * params.air_density
        * u
        * u
        * params.disk_area()
        * params.r_eq
}

/// Rotor thrust, N.
pub fn rotor_thrust(params: &TurbineParams, surfaces: &CoefficientSurface, pitch: f64, rotor_speed: f64, u: f64) -> f64 {
    let tsr = rotor_speed * params.rotor_radius / u;
    0.5 * surfaces.ct(pitch, tsr) * params.air_density * u * u * params.disk_area()
}

/// Aerodynamic power, W.
pub fn aero_power(params: &TurbineParams, surfaces: &CoefficientSurface, pitch: f64, rotor_speed: f64, u: f64) -> f64 {
    let tsr = rotor_speed * params.rotor_radius / u;
    0.5 * surfaces.cp(pitch, tsr) * params.air_density * u.powi(3) * params.disk_area()
}

/// Loads for the given inflow (already relative to the moving tower top).
///
/// `tower_deflection` only enters the tower base moment.
pub fn aero_loads(
    inflow: &RotorInflow,
    azimuth: f64,
    rotor_speed: f64,
    pitch: f64,
    tower_deflection: f64,
    params: &TurbineParams,
    surfaces: &CoefficientSurface,
) -> LoadChannels {
    let mut degenerate = false;
    let mut clamp = |u: f64| {
        if u <= MIN_BLADE_WIND {
            degenerate = true;
            MIN_BLADE_WIND
        } else {
            u
        }
    };
    let u_eff = clamp(inflow.u_eff);
    let thrust = rotor_thrust(params, surfaces, pitch, rotor_speed, u_eff);
    let power = aero_power(params, surfaces, pitch, rotor_speed, u_eff);
    let gravity = params.gravity.map_or(0.0, |g| g.amplitude());
    let mut m_oop = [0.0; 3];
    let mut m_hub_tilt = 0.0;
    for (i, m) in m_oop.iter_mut().enumerate() {
        let u = clamp(inflow.blade[i]);
        let c = blade_azimuth(azimuth, i).cos();
        *m = blade_moment(params, surfaces, pitch, rotor_speed, u) + gravity * c;
        m_hub_tilt += *m * c;
    }
    let lever = params.tower_modal_lever;
    LoadChannels {
        thrust,
        m_oop,
        m_tower_fa: thrust * (params.hub_height - lever) + params.tower_stiffness * tower_deflection * lever,
        m_hub_tilt,
        aero_torque: if rotor_speed > 0.0 { power / rotor_speed } else { 0.0 },
        aero_power: power,
        degenerate,
    }
}

/// `R_eq = M_oop / integral(F_oop dr)`, both by trapezoidal quadrature over
/// the stations `(r, f)` sorted by radius. A single station is a
/// concentrated force.
pub fn equivalent_radius(span_loads: &[(f64, f64)], m_oop: f64) -> Result<f64> {
    if span_loads.iter().any(|&(r, f)| !(f >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("distributed loads must be finite and nonnegative".into()));
    }
    let total = if span_loads.len() == 1 {
        span_loads[0].1
    } else {
        trapezoid(span_loads, |_, f| f)
    };
    if !(total > 0.0) {
        return Err(Error::ZeroIntegral);
    }
    Ok(m_oop / total)
}

fn trapezoid(pts: &[(f64, f64)], g: impl Fn(f64, f64) -> f64) -> f64 {
    pts.windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (g(w[0].0, w[0].1) + g(w[1].0, w[1].1)))
        .sum()
}

/// Trapezoid quadrature weights for the stations `r`.
fn trapezoid_weights(r: &[f64]) -> Vec<f64> {
    let n = r.len();
    (0..n)
        .map(|k| {
            let left = if k > 0 { r[k] - r[k - 1] } else { 0.0 };
            let right = if k + 1 < n { r[k + 1] - r[k] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Steady out-of-plane load per unit span, N/m, at `SPAN_STATIONS` stations
/// from hub to tip.
///
/// The shape is `r` times the Prandtl tip-loss factor at an axial induction of
/// 1/3, scaled so that it integrates to the blade's share of the rotor thrust.
pub fn steady_span_loads(
    params: &TurbineParams,
    surfaces: &CoefficientSurface,
    wind: f64,
    rotor_speed: f64,
    pitch: f64,
) -> Vec<(f64, f64)> {
    let n = SPAN_STATIONS;
    let (r0, r1) = (params.hub_radius, params.rotor_radius);
    let nb = params.n_blades as f64;
    let shape: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let r = r0 + (r1 - r0) * k as f64 / (n - 1) as f64;
            let phi = (2.0 / 3.0 * wind).atan2(rotor_speed * r);
            let tip = if phi <= 0.0 {
                1.0
            } else {
                let x = (-nb * (r1 - r) / (2.0 * r * phi.sin())).exp();
                2.0 / PI * x.clamp(0.0, 1.0).acos()
            };
            (r, r * tip)
        })
        .collect();
    let target = rotor_thrust(params, surfaces, pitch, rotor_speed, wind) / nb;
    let scale = target / trapezoid(&shape, |_, f| f);
    shape.into_iter().map(|(r, f)| (r, f * scale)).collect()
}

/// Span loads at the rated-wind steady state (optimal tip-speed ratio,
/// capped at rated speed, minimum pitch).
pub fn rated_span_loads(params: &TurbineParams, surfaces: &CoefficientSurface) -> Vec<(f64, f64)> {
    let u = params.rated_wind;
    let omega = (surrogate::TSR_OPT * u / params.rotor_radius).min(params.rated_rotor_speed);
    steady_span_loads(params, surfaces, u, omega, params.pitch_min)
}

/// Equivalent radius of the model's own rated-wind steady state.
pub fn model_equivalent_radius(params: &TurbineParams, surfaces: &CoefficientSurface) -> Result<f64> {
    let loads = rated_span_loads(params, surfaces);
    let moment = trapezoid(&loads, |r, f| r * f);
    equivalent_radius(&loads, moment)
}

/// Samples the wind field for the rotor.
#[derive(Debug, Clone)]
pub struct Inflow<'a> {
    field: &'a WindField,
    truth: RotorWindTruth,
    model: BladeInflowModel,
    r_eq: f64,
    /// `(r, weight)` with weights summing to one.
    span: Vec<(f64, f64)>,
}

impl<'a> Inflow<'a> {
    pub fn new(
        field: &'a WindField,
        params: &TurbineParams,
        surfaces: &CoefficientSurface,
        model: BladeInflowModel,
    ) -> Result<Self> {
        let truth = RotorWindTruth::from_field(field)?;
        let loads = rated_span_loads(params, surfaces);
        let r: Vec<f64> = loads.iter().map(|l| l.0).collect();
        let w: Vec<f64> = trapezoid_weights(&r)
            .iter()
            .zip(&loads)
            .map(|(q, l)| q * l.1)
            .collect();
        let total: f64 = w.iter().sum();
        let span = r.into_iter().zip(w.iter().map(|x| x / total)).collect();
        Ok(Self {
            field,
            truth,
            model,
            r_eq: params.r_eq,
            span,
        })
    }

    pub fn truth(&self) -> &RotorWindTruth {
        &self.truth
    }

    pub fn field(&self) -> &WindField {
        self.field
    }

    /// Load-weighted centroid of the span sampling, m.
    pub fn span_centroid(&self) -> f64 {
        self.span.iter().map(|(r, w)| r * w).sum()
    }

    pub fn sample(&self, t: f64, azimuth: f64) -> RotorInflow {
        let (u_eff, dh, dv) = self.truth.at(t);
        let blade = std::array::from_fn(|i| match self.model {
            BladeInflowModel::Composed => blade_effective_wind(u_eff, dh, dv, azimuth, self.r_eq, i),
            BladeInflowModel::SpanSampled => {
                let (s, c) = blade_azimuth(azimuth, i).sin_cos();
                self.span
                    .iter()
                    .map(|&(r, w)| w * self.field.sample_u(t, -r * s, r * c))
                    .sum()
            }
        });
        RotorInflow { u_eff, blade }
    }
}
