//! Time integration of the rotor, pitch actuator and tower mode.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::aero::{aero_loads, BladeInflowModel, Inflow, LoadChannels, RotorInflow};
use super::params::TurbineParams;
use super::surfaces::CoefficientSurface;
use crate::controller::ControlCommand;
use crate::windfield::WindField;
use crate::{Error, Result};

/// Largest accepted integration step, s.
pub const MAX_DT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TurbineState {
    pub time: f64,
    /// Blade 1 azimuth, rad in `[0, 2 pi)`.
    pub azimuth: f64,
    /// rad/s
    pub rotor_speed: f64,
    /// rad
    pub pitch: f64,
    /// Applied generator torque, high-speed side, N m.
    pub gen_torque: f64,
    pub tower_deflection: f64,
    pub tower_velocity: f64,
}

impl TurbineState {
    fn is_finite(&self) -> bool {
        [
            self.azimuth,
            self.rotor_speed,
            self.pitch,
            self.gen_torque,
            self.tower_deflection,
            self.tower_velocity,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

/// Pitch after one step of the rate-limited first-order actuator.
pub fn pitch_actuator(pitch: f64, demand: f64, dt: f64, params: &TurbineParams) -> f64 {
    let target = demand.clamp(params.pitch_min, params.pitch_max);
    let rate = ((target - pitch) / params.pitch_time_constant).clamp(-params.pitch_rate_limit, params.pitch_rate_limit);
    (pitch + rate * dt).clamp(params.pitch_min, params.pitch_max)
}

/// Semi-implicit Euler step of the tower mode under tower-top force `force`.
pub fn tower_step(x: f64, v: f64, force: f64, dt: f64, params: &TurbineParams) -> (f64, f64) {
    let a = (force - params.tower_damping * v - params.tower_stiffness * x) / params.tower_modal_mass;
    let v1 = v + a * dt;
    (x + v1 * dt, v1)
}

/// Reduced-order turbine driven by one wind field.
#[derive(Debug, Clone)]
pub struct Turbine<'a> {
    pub params: TurbineParams,
    pub surfaces: &'a CoefficientSurface,
    inflow: Inflow<'a>,
}

impl<'a> Turbine<'a> {
    pub fn new(
        params: TurbineParams,
        surfaces: &'a CoefficientSurface,
        field: &'a WindField,
        model: BladeInflowModel,
    ) -> Result<Self> {
        params.validate()?;
        let inflow = Inflow::new(field, &params, surfaces, model)?;
        Ok(Self {
            params,
            surfaces,
            inflow,
        })
    }

    pub fn inflow(&self) -> &Inflow<'a> {
        &self.inflow
    }

    /// Inflow relative to the moving tower top.
    pub fn relative_inflow(&self, state: &TurbineState) -> RotorInflow {
        let mut s = self.inflow.sample(state.time, state.azimuth);
        s.u_eff -= state.tower_velocity;
        for b in &mut s.blade {
            *b -= state.tower_velocity;
        }
        s
    }

    pub fn loads(&self, state: &TurbineState) -> LoadChannels {
        aero_loads(
            &self.relative_inflow(state),
            state.azimuth,
            state.rotor_speed,
            state.pitch,
            state.tower_deflection,
            &self.params,
            self.surfaces,
        )
    }

    /// Advance by `dt`. Returns the new state and the loads at the start of the step.
    pub fn step(&self, state: &TurbineState, command: &ControlCommand, dt: f64) -> Result<(TurbineState, LoadChannels)> {
        if !(dt > 0.0 && dt <= MAX_DT) {
            return Err(Error::InvalidArgument(format!("time step {dt} s outside (0, {MAX_DT}] s")));
        }
        let p = &self.params;
        let loads = self.loads(state);
        let gen_torque = command.gen_torque.max(0.0);
        let accel = (loads.aero_torque - p.gearbox_ratio * gen_torque) / p.drivetrain_inertia;
        let rotor_speed = (state.rotor_speed + accel * dt).max(0.0);
        let (tower_deflection, tower_velocity) =
            tower_step(state.tower_deflection, state.tower_velocity, loads.thrust, dt, p);
        let next = TurbineState {
            time: state.time + dt,
            azimuth: (state.azimuth + rotor_speed * dt).rem_euclid(TAU),
            rotor_speed,
            pitch: pitch_actuator(state.pitch, command.pitch, dt, p),
            gen_torque,
            tower_deflection,
            tower_velocity,
        };
        if !next.is_finite() || !loads.thrust.is_finite() {
            return Err(Error::NonFinite {
                time: state.time,
                detail: format!("{next:?}"),
            });
        }
        Ok((next, loads))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windfield::{GridSpec, TurbulenceSpec};
    use std::f64::consts::PI;

    fn laminar(u: f64) -> WindField {
        let p = TurbineParams::default();
        let grid = GridSpec::rotor_default(p.rotor_radius, p.hub_height);
        WindField::from_fn(grid, TurbulenceSpec::laminar(u, 0.0), 1.0, 200.0, move |_, _, _| u).unwrap()
    }

    #[test]
    fn torque_balance_holds_speed() {
        let s = CoefficientSurface::shipped();
        let field = laminar(9.0);
        let t = Turbine::new(TurbineParams::default(), &s, &field, BladeInflowModel::SpanSampled).unwrap();
        let mut st = TurbineState {
            rotor_speed: 0.8,
            ..Default::default()
        };
        // hold the tower at its static deflection so the relative wind is steady
        let q_a = t.loads(&st).aero_torque;
        st.tower_deflection = t.loads(&st).thrust / t.params.tower_stiffness;
        let cmd = ControlCommand::hold(q_a / t.params.gearbox_ratio, 0.0);
        for _ in 0..500 {
            st = t.step(&st, &cmd, 0.02).unwrap().0;
        }
        assert!((st.rotor_speed - 0.8).abs() < 1e-9);
    }

    #[test]
    fn torque_surplus_ramps_speed() {
        let s = CoefficientSurface::shipped();
        let field = laminar(9.0);
        let t = Turbine::new(TurbineParams::default(), &s, &field, BladeInflowModel::Composed).unwrap();
        let st0 = TurbineState {
            rotor_speed: 0.8,
            ..Default::default()
        };
        let q_a = t.loads(&st0).aero_torque;
        let dq = 2.0e6;
        let cmd = ControlCommand::hold((q_a - dq) / t.params.gearbox_ratio, 0.0);
        let (st1, _) = t.step(&st0, &cmd, 0.02).unwrap();
        let ramp = (st1.rotor_speed - st0.rotor_speed) / 0.02;
        assert!((ramp / (dq / t.params.drivetrain_inertia) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn free_tower_decay_frequency() {
        let p = TurbineParams::default();
        let (mut x, mut v) = (0.5, 0.0);
        let dt = 0.02;
        let mut crossings = Vec::new();
        let mut t = 0.0;
        for _ in 0..(200.0 / dt) as usize {
            let (x1, v1) = tower_step(x, v, 0.0, dt, &p);
            if x > 0.0 && x1 <= 0.0 {
                crossings.push(t + dt * x / (x - x1));
            }
            x = x1;
            v = v1;
            t += dt;
        }
        let n = crossings.len() - 1;
        let f = n as f64 / (crossings[n] - crossings[0]);
        let m = p.tower_modal_mass;
        let analytic = (p.tower_stiffness / m - (p.tower_damping / (2.0 * m)).powi(2)).sqrt() / (2.0 * PI);
        assert!((f / analytic - 1.0).abs() < 0.01, "f {f} analytic {analytic}");
    }

    #[test]
    fn pitch_actuator_limits() {
        let p = TurbineParams::default();
        let b = pitch_actuator(0.0, 1.0, 0.02, &p);
        assert!((b - p.pitch_rate_limit * 0.02).abs() < 1e-15);
        let small = pitch_actuator(0.1, 0.1 + 1e-4, 0.02, &p);
        assert!((small - (0.1 + 1e-4 * 0.02 / 0.3)).abs() < 1e-15);
        assert_eq!(pitch_actuator(0.0, -1.0, 0.02, &p), 0.0);
    }

    #[test]
    fn rejects_large_steps_and_is_deterministic() {
        let s = CoefficientSurface::shipped();
        let field = laminar(12.0);
        let t = Turbine::new(TurbineParams::default(), &s, &field, BladeInflowModel::SpanSampled).unwrap();
        let st = TurbineState {
            rotor_speed: 1.0,
            ..Default::default()
        };
        let cmd = ControlCommand::hold(1.0e5, 0.05);
        assert!(t.step(&st, &cmd, 0.1).is_err());
        let run = || {
            let mut s1 = st;
            for _ in 0..100 {
                s1 = t.step(&s1, &cmd, 0.02).unwrap().0;
            }
            s1
        };
        assert_eq!(run(), run());
    }
}
