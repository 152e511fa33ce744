//! Steady operating point under the baseline controller in uniform wind.

use super::baseline::BaselineConfig;
use crate::turbine::{aero_power, rotor_thrust, CoefficientSurface, TurbineParams, TurbineState};

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rotor speed, pitch, generator torque and static tower deflection at
/// steady uniform wind `wind`.
pub fn steady_state(
    params: &TurbineParams,
    surfaces: &CoefficientSurface,
    config: &BaselineConfig,
    wind: f64,
) -> TurbineState {
    let q_aero = |omega: f64, pitch: f64| aero_power(params, surfaces, pitch, omega, wind) / omega;
    let rated_torque = config.torque_for_power(config.rated_power, config.rated_speed);
    let n = config.gearbox_ratio;
    let surplus = |omega: f64| q_aero(omega, config.pitch_min) - n * (config.k_opt * omega * omega).min(rated_torque);
    let (omega, pitch, gen_torque) = if surplus(config.rated_speed) <= 0.0 {
        let omega = bisect(0.05, config.rated_speed, surplus);
        (omega, config.pitch_min, (config.k_opt * omega * omega).min(rated_torque))
    } else {
        let omega = config.rated_speed;
        let pitch = bisect(config.pitch_min, config.pitch_max, |b| q_aero(omega, b) - n * rated_torque);
        (omega, pitch, rated_torque)
    };
    let thrust = rotor_thrust(params, surfaces, pitch, omega, wind);
    TurbineState {
        time: 0.0,
        azimuth: 0.0,
        rotor_speed: omega,
        pitch,
        gen_torque,
        tower_deflection: thrust / params.tower_stiffness,
        tower_velocity: 0.0,
    }
}
