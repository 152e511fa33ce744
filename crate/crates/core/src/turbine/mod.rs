//! Reduced-order 10 MW turbine: quasi-steady aerodynamics, rigid drivetrain,
//! first tower fore-aft mode and blade root out-of-plane moments.

mod aero;
mod dynamics;
mod params;
mod surfaces;

pub use aero::{
    aero_loads, aero_power, blade_azimuth, blade_effective_wind, blade_moment, equivalent_radius,
    model_equivalent_radius, rated_span_loads, rotor_thrust, steady_span_loads, BladeInflowModel, Inflow,
    LoadChannels, RotorInflow, MIN_BLADE_WIND, SPAN_STATIONS,
};
pub use dynamics::{pitch_actuator, tower_step, Turbine, TurbineState, MAX_DT};
pub use params::{GravityMoment, TurbineParams, DEFAULT_R_EQ, TOWER_DAMPING_RATIO, TOWER_FREQUENCY};
pub use surfaces::{surrogate, surrogate_surfaces, CoefficientSurface, SHIPPED_SURFACES};
