use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const RPM: f64 = 2.0 * PI / 60.0;

/// Optional out-of-plane gravity moment on each blade root,
/// `blade_mass * g * r_cg * coupling * cos(phi_i)`.
///
/// `coupling` is the out-of-plane projection of the blade weight from rotor
/// tilt and coning. The estimator does not model this term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravityMoment {
    pub blade_mass: f64,
    pub r_cg: f64,
    pub coupling: f64,
}

impl Default for GravityMoment {
    fn default() -> Self {
        Self {
            blade_mass: 41_716.0,
            r_cg: 26.2,
            coupling: (7.5f64).to_radians().sin(),
        }
    }
}

impl GravityMoment {
    pub fn amplitude(&self) -> f64 {
        self.blade_mass * 9.81 * self.r_cg * self.coupling
    }
}

/// DTU 10 MW-like reduced-order turbine parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurbineParams {
    pub rotor_radius: f64,
    pub hub_radius: f64,
    pub hub_height: f64,
    pub rated_power: f64,
    pub rated_wind: f64,
    /// rad/s, rotor side
    pub rated_rotor_speed: f64,
    /// rad/s, rotor side
    pub min_rotor_speed: f64,
    /// kg m², rotor side
    pub drivetrain_inertia: f64,
    pub gearbox_ratio: f64,
    pub generator_efficiency: f64,
    pub air_density: f64,
    pub n_blades: usize,
    /// Equivalent radius of the blade thrust share, m.
    pub r_eq: f64,
    /// kg
    pub tower_modal_mass: f64,
    /// N/m
    pub tower_stiffness: f64,
    /// N s/m
    pub tower_damping: f64,
    /// Lever of the dynamic tower-top force about the tower base, m.
    pub tower_modal_lever: f64,
    /// s
    pub pitch_time_constant: f64,
    /// rad/s
    pub pitch_rate_limit: f64,
    /// rad
    pub pitch_min: f64,
    /// rad
    pub pitch_max: f64,
    pub gravity: Option<GravityMoment>,
}

/// First tower fore-aft frequency, Hz.
pub const TOWER_FREQUENCY: f64 = 0.25;
/// Structural damping ratio of the tower mode.
pub const TOWER_DAMPING_RATIO: f64 = 0.01;

/// R_eq from [`crate::turbine::equivalent_radius`] applied to the steady
/// span-wise load at rated wind with the shipped coefficient surfaces.
pub const DEFAULT_R_EQ: f64 = 56.986_476_650_941_44;

impl Default for TurbineParams {
    fn default() -> Self {
        let tower_modal_mass = 8.5e5;
        let omega = 2.0 * PI * TOWER_FREQUENCY;
        let tower_stiffness = tower_modal_mass * omega * omega;
        let tower_damping = 2.0 * TOWER_DAMPING_RATIO * (tower_stiffness * tower_modal_mass).sqrt();
        Self {
            rotor_radius: 89.15,
            hub_radius: 2.8,
            hub_height: 119.0,
            rated_power: 10.0e6,
            rated_wind: 11.4,
            rated_rotor_speed: 9.6 * RPM,
            min_rotor_speed: 6.0 * RPM,
            drivetrain_inertia: 1.6e8,
            gearbox_ratio: 50.0,
            generator_efficiency: 0.94,
            air_density: 1.225,
            n_blades: 3,
            r_eq: DEFAULT_R_EQ,
            tower_modal_mass,
            tower_stiffness,
            tower_damping,
            tower_modal_lever: 119.0,
            pitch_time_constant: 0.3,
            pitch_rate_limit: 10f64.to_radians(),
            pitch_min: 0.0,
            pitch_max: 40f64.to_radians(),
            gravity: None,
        }
    }
}

impl TurbineParams {
    pub fn disk_area(&self) -> f64 {
        PI * self.rotor_radius * self.rotor_radius
    }

    /// Rated torque at the generator (high-speed side), N m.
    pub fn rated_gen_torque(&self) -> f64 {
        self.rated_power / (self.generator_efficiency * self.gearbox_ratio * self.rated_rotor_speed)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rotor_radius", self.rotor_radius),
            ("hub_height", self.hub_height),
            ("rated_power", self.rated_power),
            ("rated_wind", self.rated_wind),
            ("rated_rotor_speed", self.rated_rotor_speed),
            ("drivetrain_inertia", self.drivetrain_inertia),
            ("gearbox_ratio", self.gearbox_ratio),
            ("generator_efficiency", self.generator_efficiency),
            ("air_density", self.air_density),
            ("r_eq", self.r_eq),
            ("tower_modal_mass", self.tower_modal_mass),
            ("tower_stiffness", self.tower_stiffness),
            ("tower_damping", self.tower_damping),
            ("pitch_time_constant", self.pitch_time_constant),
            ("pitch_rate_limit", self.pitch_rate_limit),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("turbine parameter {name} = {v} must be positive")));
            }
        }
        if self.n_blades != 3 {
            return Err(Error::InvalidArgument("the multiblade transform needs exactly 3 blades".into()));
        }
        if self.r_eq >= self.rotor_radius {
            return Err(Error::InvalidArgument(format!(
                "r_eq {} m must be below the rotor radius {} m",
                self.r_eq, self.rotor_radius
            )));
        }
        Ok(())
    }
}
