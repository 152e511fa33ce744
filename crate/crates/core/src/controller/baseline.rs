//! Variable-speed, pitch-regulated baseline controller.

use serde::{Deserialize, Serialize};

use super::command::ControlCommand;
use crate::turbine::{surrogate, TurbineParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    /// Optimal-torque gain, generator torque per rotor speed squared, N m s².
    pub k_opt: f64,
    /// W, electrical
    pub rated_power: f64,
    /// rad/s, rotor side
    pub rated_speed: f64,
    pub gearbox_ratio: f64,
    pub generator_efficiency: f64,
    /// rad
    pub pitch_min: f64,
    /// rad
    pub pitch_max: f64,
    /// Proportional gain at minimum pitch, rad per rad/s.
    pub kp: f64,
    /// Integral gain at minimum pitch, rad per rad.
    pub ki: f64,
    /// Gain-schedule factor versus pitch, `(pitch_deg, factor)`, ascending.
    pub gain_schedule: Vec<(f64, f64)>,
    /// Pitch above minimum at which torque switches to constant power, rad.
    pub region_margin: f64,
}

/// Knee of the default `1 / (1 + pitch / knee)` gain schedule, deg.
pub const SCHEDULE_KNEE_DEG: f64 = 15.0;

impl BaselineConfig {
    pub fn for_turbine(p: &TurbineParams) -> Self {
        let r = p.rotor_radius;
        let k_rotor = 0.5 * p.air_density * p.disk_area() * r.powi(3) * surrogate::CP_MAX / surrogate::TSR_OPT.powi(3);
        let gain_schedule = (0..=8)
            .map(|k| {
                let deg = 5.0 * k as f64;
                (deg, 1.0 / (1.0 + deg / SCHEDULE_KNEE_DEG))
            })
            .collect();
        Self {
            k_opt: k_rotor / p.gearbox_ratio,
            rated_power: p.rated_power,
            rated_speed: p.rated_rotor_speed,
            gearbox_ratio: p.gearbox_ratio,
            generator_efficiency: p.generator_efficiency,
            pitch_min: p.pitch_min,
            pitch_max: p.pitch_max,
            kp: 4.6,
            ki: 1.24,
            gain_schedule,
            region_margin: 0.5f64.to_radians(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k_opt", self.k_opt),
            ("rated_power", self.rated_power),
            ("rated_speed", self.rated_speed),
            ("kp", self.kp),
            ("ki", self.ki),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidArgument(format!("baseline {name} = {v} must be positive")));
            }
        }
        let gs = &self.gain_schedule;
        if gs.is_empty()
            || !gs.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 <= w[0].1)
            || gs.iter().any(|g| !(g.1 > 0.0))
        {
            return Err(Error::InvalidArgument(
                "gain schedule must have ascending pitch and positive, non-increasing factors".into(),
            ));
        }
        Ok(())
    }

    /// Schedule factor at pitch `pitch` (rad), linear between entries, flat outside.
    pub fn schedule(&self, pitch: f64) -> f64 {
        let deg = pitch.to_degrees();
        let gs = &self.gain_schedule;
        if deg <= gs[0].0 {
            return gs[0].1;
        }
        if deg >= gs[gs.len() - 1].0 {
            return gs[gs.len() - 1].1;
        }
        let j = gs.partition_point(|g| g.0 <= deg) - 1;
        let a = (deg - gs[j].0) / (gs[j + 1].0 - gs[j].0);
        gs[j].1 + a * (gs[j + 1].1 - gs[j].1)
    }

    /// Generator torque holding `power` (electrical) at rotor speed `speed`.
    pub fn torque_for_power(&self, power: f64, speed: f64) -> f64 {
        power / (self.generator_efficiency * self.gearbox_ratio * speed)
    }

    pub fn electrical_power(&self, gen_torque: f64, speed: f64) -> f64 {
        self.generator_efficiency * self.gearbox_ratio * gen_torque * speed
    }
}

/// References the baseline loop tracks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setpoints {
    /// W, electrical
    pub power: f64,
    /// rad/s
    pub speed: f64,
}

/// Measured signals available to the controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurements {
    pub rotor_speed: f64,
    pub pitch: f64,
    pub power: f64,
}

#[derive(Debug, Clone)]
pub struct BaselineController {
    pub config: BaselineConfig,
    integrator: f64,
    pitch_demand: f64,
}

impl BaselineController {
    pub fn new(config: BaselineConfig) -> Result<Self> {
        config.validate()?;
        let pitch_min = config.pitch_min;
        Ok(Self {
            config,
            integrator: pitch_min,
            pitch_demand: pitch_min,
        })
    }

    pub fn rated_setpoints(&self) -> Setpoints {
        Setpoints {
            power: self.config.rated_power,
            speed: self.config.rated_speed,
        }
    }

    /// Start from a known pitch, e.g. a trimmed operating point.
    pub fn initialise(&mut self, pitch: f64) {
        self.integrator = pitch.clamp(self.config.pitch_min, self.config.pitch_max);
        self.pitch_demand = self.integrator;
    }

    /// One controller interval. `gain_scale` multiplies both PI gains.
    pub fn step(&mut self, m: &Measurements, sp: &Setpoints, gain_scale: f64, dt: f64) -> ControlCommand {
        let c = &self.config;
        let gs = c.schedule(m.pitch) * gain_scale;
        let err = m.rotor_speed - sp.speed;
        self.integrator = (self.integrator + c.ki * gs * err * dt).clamp(c.pitch_min, c.pitch_max);
        self.pitch_demand = (self.integrator + c.kp * gs * err).clamp(c.pitch_min, c.pitch_max);

        let speed = m.rotor_speed.max(1e-3);
        let rated_torque = c.torque_for_power(sp.power, sp.speed);
        let gen_torque = if self.pitch_demand > c.pitch_min + c.region_margin {
            // constant power, bounded to avoid runaway torque at low speed
            c.torque_for_power(sp.power, speed).min(1.25 * rated_torque)
        } else {
            (c.k_opt * speed * speed).min(rated_torque)
        };
        ControlCommand::hold(gen_torque, self.pitch_demand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_gain_value() {
        let c = BaselineConfig::for_turbine(&TurbineParams::default());
        assert!((c.k_opt / 2.445e5 - 1.0).abs() < 2e-3, "{}", c.k_opt);
        c.validate().unwrap();
    }

    #[test]
    fn schedule_is_monotone_and_interpolates() {
        let c = BaselineConfig::for_turbine(&TurbineParams::default());
        assert_eq!(c.schedule(0.0), 1.0);
        assert!((c.schedule(15f64.to_radians()) - 0.5).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for k in 0..100 {
            let g = c.schedule((k as f64 * 0.5).to_radians());
            assert!(g <= prev);
            prev = g;
        }
    }

    #[test]
    fn below_rated_tracks_optimal_torque() {
        let c = BaselineConfig::for_turbine(&TurbineParams::default());
        let mut b = BaselineController::new(c.clone()).unwrap();
        let sp = b.rated_setpoints();
        let m = Measurements {
            rotor_speed: 0.7,
            pitch: 0.0,
            power: 0.0,
        };
        let cmd = b.step(&m, &sp, 1.0, 0.1);
        assert_eq!(cmd.pitch, c.pitch_min);
        assert!((cmd.gen_torque - c.k_opt * 0.49).abs() < 1e-6);
    }

    #[test]
    fn rejects_increasing_schedule() {
        let mut c = BaselineConfig::for_turbine(&TurbineParams::default());
        c.gain_schedule = vec![(0.0, 1.0), (10.0, 1.2)];
        assert!(c.validate().is_err());
    }
}
