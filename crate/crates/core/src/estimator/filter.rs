//! Second-order low-pass filter, bilinear transform with prewarping.

use std::f64::consts::PI;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LowPass {
    b: [f64; 3],
    a: [f64; 2],
    state: Option<[f64; 2]>,
}

impl LowPass {
    /// `cutoff` in Hz, `damping` in (0, 2], sample interval `dt` in s.
    pub fn new(cutoff: f64, damping: f64, dt: f64) -> Result<Self> {
        if !(cutoff > 0.0) || !(damping > 0.0 && damping <= 2.0) || !(dt > 0.0) || cutoff >= 0.5 / dt {
            return Err(Error::InvalidArgument(format!(
                "low-pass needs 0 < f_c < Nyquist and 0 < zeta <= 2 (f_c {cutoff}, zeta {damping}, dt {dt})"
            )));
        }
        let w = 2.0 * PI * cutoff;
        let k = w / (w * dt / 2.0).tan();
        let a0 = k * k + 2.0 * damping * w * k + w * w;
        let b0 = w * w / a0;
        Ok(Self {
            b: [b0, 2.0 * b0, b0],
            a: [(2.0 * w * w - 2.0 * k * k) / a0, (k * k - 2.0 * damping * w * k + w * w) / a0],
            state: None,
        })
    }

    /// Filter one sample. The first sample initialises the filter at steady state.
    pub fn step(&mut self, x: f64) -> f64 {
        let [b0, b1, b2] = self.b;
        let [a1, a2] = self.a;
        let [s1, s2] = *self.state.get_or_insert_with(|| {
            let s2 = (b2 - a2) * x;
            [(1.0 - b0) * x, s2]
        });
        let y = b0 * x + s1;
        self.state = Some([b1 * x - a1 * y + s2, b2 * x - a2 * y]);
        y
    }

    pub fn reset(&mut self) {
        self.state = None;
    }
}

/// Filter a whole uniformly sampled series.
pub fn lowpass(x: &[f64], cutoff: f64, damping: f64, dt: f64) -> Result<Vec<f64>> {
    let mut f = LowPass::new(cutoff, damping, dt)?;
    Ok(x.iter().map(|&v| f.step(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_is_passed_exactly() {
        let y = lowpass(&vec![3.7; 2000], 0.08, 0.7, 0.1).unwrap();
        let settled = (10.0 / 0.08 / 0.1) as usize;
        assert!(y[settled..].iter().all(|v| (v - 3.7).abs() < 1e-9));
    }

    #[test]
    fn attenuates_far_above_cutoff() {
        let (fc, dt) = (0.08, 0.1);
        let f = 10.0 * fc;
        let x: Vec<f64> = (0..6000).map(|k| (2.0 * PI * f * k as f64 * dt).sin()).collect();
        let mut lp = LowPass::new(fc, 0.7, dt).unwrap();
        lp.step(0.0);
        let y: Vec<f64> = x.iter().map(|&v| lp.step(v)).collect();
        let amp = y[3000..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // analytic continuous magnitude is about 1 %
        assert!(amp < 0.05, "amplitude {amp}");
    }

    #[test]
    fn step_response_settles_after_one_overshoot() {
        let mut lp = LowPass::new(0.08, 0.7, 0.1).unwrap();
        lp.step(0.0);
        let y: Vec<f64> = (0..1500).map(|_| lp.step(1.0)).collect();
        let mut excursions = 0;
        let mut outside = false;
        for &v in y.iter().skip_while(|&&v| v < 0.95) {
            let out = (v - 1.0).abs() > 0.05;
            if out && !outside {
                excursions += 1;
            }
            outside = out;
        }
        assert!(excursions <= 1);
        assert!((y[1499] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LowPass::new(0.0, 0.7, 0.1).is_err());
        assert!(LowPass::new(0.08, 2.5, 0.1).is_err());
        assert!(LowPass::new(6.0, 0.7, 0.1).is_err());
    }
}
