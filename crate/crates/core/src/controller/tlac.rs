//! Turbulence-based load-alleviation layer on top of the baseline controller.

use serde::{Deserialize, Serialize};

use super::baseline::Setpoints;
use super::buffer::SlidingStats;
use super::command::ControlMode;
use crate::{Error, Result};

/// Power fraction for statistic `x`: one below `delta_t`, linear down to
/// `p_lim` at `delta_ub`, `p_lim` above.
pub fn derate_fraction(x: f64, delta_t: f64, delta_ub: f64, p_lim: f64) -> f64 {
    if x < delta_t {
        1.0
    } else if x > delta_ub {
        p_lim
    } else {
        // the ratio is formed first so that x == delta_ub gives exactly p_lim
        // (for p_lim >= 0.5, where 1 - p_lim is exact)
        1.0 - (1.0 - p_lim) * ((x - delta_t) / (delta_ub - delta_t))
    }
}

/// PI gain multiplier during a long-term event.
pub fn schedule_gains(mode: ControlMode, delta_hat: f64, delta_t: f64, delta_ub: f64, boost: f64) -> f64 {
    if mode != ControlMode::LongTermDerate {
        return 1.0;
    }
    1.0 + boost * ((delta_hat - delta_t) / (delta_ub - delta_t)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerateStrategy {
    Torque,
    #[default]
    RotorSpeed,
}

/// Power and speed references for set point `p_sp`.
pub fn apply_derate(p_sp: f64, rated: &Setpoints, strategy: DerateStrategy) -> Setpoints {
    match strategy {
        DerateStrategy::Torque => Setpoints {
            power: p_sp * rated.power,
            speed: rated.speed,
        },
        DerateStrategy::RotorSpeed => Setpoints {
            power: p_sp * rated.power,
            speed: p_sp.cbrt() * rated.speed,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    /// Nominal wind speed of the bin, m/s.
    pub wind: f64,
    pub delta_avg: f64,
    pub delta_std: f64,
    /// Windows behind the estimate; zero for hand-set values.
    #[serde(default)]
    pub windows: usize,
}

/// Thresholds versus wind speed, linear between bins and flat outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    #[serde(rename = "bin")]
    pub bins: Vec<ThresholdEntry>,
}

impl ThresholdTable {
    pub fn uniform(delta_avg: f64, delta_std: f64) -> Self {
        Self {
            bins: vec![ThresholdEntry {
                wind: 12.0,
                delta_avg,
                delta_std,
                windows: 0,
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bins.is_empty() || !self.bins.windows(2).all(|w| w[1].wind > w[0].wind) {
            return Err(Error::InvalidArgument("threshold bins must be nonempty and ascending".into()));
        }
        if self.bins.iter().any(|b| !(b.delta_avg > 0.0 && b.delta_std > 0.0)) {
            return Err(Error::InvalidArgument("thresholds must be positive".into()));
        }
        Ok(())
    }

    /// `(delta_avg, delta_std)` thresholds at wind `u`.
    pub fn at(&self, u: f64) -> (f64, f64) {
        let b = &self.bins;
        let n = b.len();
        if u <= b[0].wind {
            return (b[0].delta_avg, b[0].delta_std);
        }
        if u >= b[n - 1].wind {
            return (b[n - 1].delta_avg, b[n - 1].delta_std);
        }
        let j = b.partition_point(|e| e.wind <= u) - 1;
        let a = (u - b[j].wind) / (b[j + 1].wind - b[j].wind);
        (
            b[j].delta_avg + a * (b[j + 1].delta_avg - b[j].delta_avg),
            b[j].delta_std + a * (b[j + 1].delta_std - b[j].delta_std),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TlacConfig {
    /// m/s
    pub u_lb: f64,
    /// m/s
    pub u_ub: f64,
    pub thresholds: ThresholdTable,
    /// Upper bound as a multiple of the threshold.
    pub ub_factor: f64,
    pub p_lim: f64,
    /// Short buffer length, s.
    pub short_window: f64,
    /// Long buffer length, s.
    pub long_window: f64,
    pub long_term: bool,
    /// Long-term mode releases below this fraction of the thresholds.
    pub release_fraction: f64,
    /// Set-point ramp limit, 1/s.
    pub ramp_rate: f64,
    pub strategy: DerateStrategy,
    /// Largest relative PI gain increase in long-term mode.
    pub gain_boost: f64,
    /// Estimator sample interval, s.
    pub dt: f64,
}

impl Default for TlacConfig {
    fn default() -> Self {
        Self {
            u_lb: 8.0,
            u_ub: 16.0,
            thresholds: ThresholdTable::uniform(0.02, 0.01),
            ub_factor: 2.0,
            p_lim: 0.8,
            short_window: 60.0,
            long_window: 600.0,
            long_term: true,
            release_fraction: 0.9,
            ramp_rate: 0.05,
            strategy: DerateStrategy::RotorSpeed,
            gain_boost: 0.3,
            dt: 0.1,
        }
    }
}

impl TlacConfig {
    pub fn validate(&self) -> Result<()> {
        self.thresholds.validate()?;
        if !(self.p_lim > 0.0 && self.p_lim < 1.0) {
            return Err(Error::InvalidArgument(format!("p_lim {} must be in (0, 1)", self.p_lim)));
        }
        if !(self.ub_factor > 1.0) {
            return Err(Error::InvalidArgument("upper bound must exceed the threshold".into()));
        }
        if !(self.u_lb < self.u_ub) {
            return Err(Error::InvalidArgument("u_lb must be below u_ub".into()));
        }
        if !(self.dt > 0.0 && self.short_window >= self.dt && self.long_window >= self.short_window) {
            return Err(Error::InvalidArgument("buffer windows must cover at least one sample".into()));
        }
        if !(self.ramp_rate > 0.0) || !(self.gain_boost >= 0.0) {
            return Err(Error::InvalidArgument("ramp rate and gain boost must be positive".into()));
        }
        Ok(())
    }
}

/// Output of one load-alleviation update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlacOutput {
    /// Ramped power set point.
    pub p_sp: f64,
    /// Unramped set point.
    pub p_target: f64,
    pub mode: ControlMode,
    pub gain_scale: f64,
}

#[derive(Debug, Clone)]
pub struct TlacLayer {
    pub config: TlacConfig,
    short_delta: SlidingStats,
    short_wind: SlidingStats,
    long_delta: SlidingStats,
    long_wind: SlidingStats,
    latched_since: Option<f64>,
    p_sp: f64,
}

impl TlacLayer {
    pub fn new(config: TlacConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            short_delta: SlidingStats::with_duration(config.short_window, config.dt),
            short_wind: SlidingStats::with_duration(config.short_window, config.dt),
            long_delta: SlidingStats::with_duration(config.long_window, config.dt),
            long_wind: SlidingStats::with_duration(config.long_window, config.dt),
            config,
            latched_since: None,
            p_sp: 1.0,
        })
    }

    /// Fraction from buffer statistics `(avg, std)` against thresholds at `u`.
    pub fn combined_fraction(&self, stats: (f64, f64), u: f64) -> f64 {
        let c = &self.config;
        let (t_avg, t_std) = c.thresholds.at(u);
        let p_avg = derate_fraction(stats.0, t_avg, c.ub_factor * t_avg, c.p_lim);
        let p_std = derate_fraction(stats.1, t_std, c.ub_factor * t_std, c.p_lim);
        p_avg.min(p_std)
    }

    /// Update with the filtered, calibrated estimate at time `t`.
    pub fn step(&mut self, t: f64, u_hat: f64, delta_hat: f64) -> TlacOutput {
        let c = self.config.clone();
        self.short_delta.push(delta_hat);
        self.short_wind.push(u_hat);
        self.long_delta.push(delta_hat);
        self.long_wind.push(u_hat);

        let short = self.short_delta.stats().zip(self.short_wind.stats());
        let long = self.long_delta.stats().zip(self.long_wind.stats());
        let in_gate = |u: f64| u >= c.u_lb && u <= c.u_ub;

        let mut p_target = match short {
            Some((s, (u, _))) if in_gate(u) => self.combined_fraction(s, u),
            _ => 1.0,
        };

        if c.long_term {
            if let Some((s, (u, _))) = long {
                let (t_avg, t_std) = c.thresholds.at(u);
                let exceeded = s.0 > t_avg || s.1 > t_std;
                let cleared = s.0 < c.release_fraction * t_avg && s.1 < c.release_fraction * t_std;
                match self.latched_since {
                    None if exceeded && in_gate(u) => self.latched_since = Some(t),
                    Some(t0) if t - t0 >= c.long_window && (cleared || !in_gate(u)) => self.latched_since = None,
                    _ => {}
                }
                if self.latched_since.is_some() {
                    // long statistics govern; short-term swings are suppressed
                    p_target = if in_gate(u) { self.combined_fraction(s, u) } else { 1.0 };
                }
            }
        }

        let step = c.ramp_rate * c.dt;
        self.p_sp = (self.p_sp + (p_target - self.p_sp).clamp(-step, step)).clamp(c.p_lim, 1.0);

        let mode = if self.latched_since.is_some() {
            ControlMode::LongTermDerate
        } else if self.p_sp < 1.0 {
            ControlMode::ShortTermDerate
        } else {
            ControlMode::Normal
        };
        let gain_scale = match long {
            Some((_, (u, _))) => {
                let (t_avg, _) = c.thresholds.at(u);
                schedule_gains(mode, delta_hat, t_avg, c.ub_factor * t_avg, c.gain_boost)
            }
            None => 1.0,
        };
        TlacOutput {
            p_sp: self.p_sp,
            p_target,
            mode,
            gain_scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derate_knots_and_midpoint() {
        assert_eq!(derate_fraction(0.05, 0.05, 0.15, 0.8), 1.0);
        assert_eq!(derate_fraction(0.15, 0.05, 0.15, 0.8), 0.8);
        assert!((derate_fraction(0.10, 0.05, 0.15, 0.8) - 0.9).abs() < 1e-12);
        assert_eq!(derate_fraction(1.5, 0.05, 0.15, 0.8), 0.8);
        assert_eq!(derate_fraction(0.01, 0.05, 0.15, 0.8), 1.0);
    }

    #[test]
    fn gain_boost_values() {
        assert_eq!(schedule_gains(ControlMode::Normal, 1.0, 0.02, 0.04, 0.3), 1.0);
        assert!((schedule_gains(ControlMode::LongTermDerate, 0.05, 0.02, 0.04, 0.3) - 1.3).abs() < 1e-15);
        assert_eq!(schedule_gains(ControlMode::LongTermDerate, 0.02, 0.02, 0.04, 0.3), 1.0);
    }

    #[test]
    fn no_derate_leaves_setpoints() {
        let rated = Setpoints {
            power: 10e6,
            speed: 1.0,
        };
        for s in [DerateStrategy::Torque, DerateStrategy::RotorSpeed] {
            assert_eq!(apply_derate(1.0, &rated, s), rated);
        }
        let sp = apply_derate(0.8, &rated, DerateStrategy::RotorSpeed);
        assert!((sp.speed - 0.8f64.cbrt()).abs() < 1e-15);
    }

    fn layer() -> TlacLayer {
        TlacLayer::new(TlacConfig {
            thresholds: ThresholdTable::uniform(0.02, 0.005),
            long_term: false,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn quiet_inflow_keeps_full_power() {
        let mut l = layer();
        for k in 0..1000 {
            let o = l.step(k as f64 * 0.1, 12.0, 0.01);
            assert_eq!(o.p_sp, 1.0);
            assert_eq!(o.mode, ControlMode::Normal);
        }
    }

    #[test]
    fn wind_gate_blocks_derating() {
        let mut l = layer();
        for k in 0..1000 {
            assert_eq!(l.step(k as f64 * 0.1, 7.0, 0.5).p_sp, 1.0);
        }
    }

    #[test]
    fn strong_shear_derates_with_ramp() {
        let mut l = layer();
        let mut last = 1.0;
        for k in 0..2000 {
            let o = l.step(k as f64 * 0.1, 12.0, 0.1);
            assert!(last - o.p_sp <= 0.05 * 0.1 + 1e-12);
            last = o.p_sp;
        }
        assert!((last - 0.8).abs() < 1e-12);
    }

    #[test]
    fn long_term_mode_latches() {
        let mut l = TlacLayer::new(TlacConfig {
            thresholds: ThresholdTable::uniform(0.02, 0.005),
            ..Default::default()
        })
        .unwrap();
        let mut t = 0.0;
        let mut modes = Vec::new();
        for _ in 0..7000 {
            modes.push(l.step(t, 12.0, 0.05).mode);
            t += 0.1;
        }
        assert_eq!(*modes.last().unwrap(), ControlMode::LongTermDerate);
        // shear drops: the mode holds until the long buffer has cleared
        let mut held = 0;
        for _ in 0..8000 {
            if l.step(t, 12.0, 0.0).mode == ControlMode::LongTermDerate {
                held += 1;
            }
            t += 0.1;
        }
        assert!(held > 5000 && held < 8000, "held {held}");
    }
}
