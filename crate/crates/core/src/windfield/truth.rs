//! Ground-truth rotor-averaged wind speed and linear shears.
//!
//! The streamwise component over the in-disk grid points is fitted by
//! ordinary least squares to `u = U_eff + delta_h * dy + delta_v * dz`.

use serde::{Deserialize, Serialize};

use super::field::WindField;
use super::grid::GridSpec;
use crate::{Error, Result};

/// Precomputed least-squares projector for one grid.
#[derive(Debug, Clone)]
pub struct RotorFit {
    indices: Vec<usize>,
    /// Rows of (AᵀA)⁻¹Aᵀ for U_eff, delta_h, delta_v.
    weights: [Vec<f64>; 3],
}

impl RotorFit {
    pub fn new(grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        let offsets = grid.offsets();
        let indices = grid.disk_indices();
        let pts: Vec<(f64, f64)> = indices.iter().map(|&i| offsets[i]).collect();
        Self::from_points(indices, &pts)
    }

    fn from_points(indices: Vec<usize>, pts: &[(f64, f64)]) -> Result<Self> {
        let n = pts.len() as f64;
        let (mut sy, mut sz, mut syy, mut syz, mut szz) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(y, z) in pts {
            sy += y;
            sz += z;
            syy += y * y;
            syz += y * z;
            szz += z * z;
        }
        let ata = [[n, sy, sz], [sy, syy, syz], [sz, syz, szz]];
        let inv = invert3(&ata)?;
        let weights = std::array::from_fn(|row| {
            pts.iter()
                .map(|&(y, z)| inv[row][0] + inv[row][1] * y + inv[row][2] * z)
                .collect()
        });
        Ok(Self { indices, weights })
    }

    pub fn n_points(&self) -> usize {
        self.indices.len()
    }

    /// Fit from a snapshot given as a per-grid-point accessor.
    pub fn fit_with<F: Fn(usize) -> f64>(&self, u: F) -> (f64, f64, f64) {
        let mut out = [0.0; 3];
        for (k, &i) in self.indices.iter().enumerate() {
            let ui = u(i);
            for (o, w) in out.iter_mut().zip(&self.weights) {
                *o += w[k] * ui;
            }
        }
        (out[0], out[1], out[2])
    }

    /// Fit from a full-grid snapshot (`snapshot.len() == grid.n_points()`).
    pub fn fit(&self, snapshot: &[f64]) -> (f64, f64, f64) {
        self.fit_with(|i| snapshot[i])
    }
}

fn invert3(m: &[[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let c00 = cof(1, 2, 1, 2);
    let c01 = -cof(1, 2, 0, 2);
    let c02 = cof(1, 2, 0, 1);
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    // determinant relative to the diagonal product flags collinear point sets
    let scale = m[0][0].abs() * m[1][1].abs() * m[2][2].abs();
    let condition = if det != 0.0 { scale / det.abs() } else { f64::INFINITY };
    if !(condition < 1e10) {
        return Err(Error::RankDeficient {
            condition,
            detail: "in-disk grid points are collinear".into(),
        });
    }
    let c10 = -cof(0, 2, 1, 2);
    let c11 = cof(0, 2, 0, 2);
    let c12 = -cof(0, 2, 0, 1);
    let c20 = cof(0, 1, 1, 2);
    let c21 = -cof(0, 1, 0, 2);
    let c22 = cof(0, 1, 0, 1);
    // inverse = adjugate / det, adjugate is the transposed cofactor matrix
    Ok([
        [c00 / det, c10 / det, c20 / det],
        [c01 / det, c11 / det, c21 / det],
        [c02 / det, c12 / det, c22 / det],
    ])
}

/// Least-squares rotor average at time `t`: `(u_eff, delta_h, delta_v)`.
pub fn fit_rotor_average(field: &WindField, t: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=field.duration()).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "t = {t} s outside field duration {} s",
            field.duration()
        )));
    }
    let fit = RotorFit::new(&field.grid)?;
    Ok(fit.fit_with(|i| field.u_at(i, t)))
}

/// Rotor-averaged wind series at the field sample rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotorWindTruth {
    pub dt: f64,
    pub u_eff: Vec<f64>,
    pub delta_h: Vec<f64>,
    pub delta_v: Vec<f64>,
    pub delta: Vec<f64>,
}

/// Statistics of the rotor-averaged wind over one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthStatistics {
    pub u_mean: f64,
    pub u_std: f64,
    pub i_eff: f64,
    pub delta_mean: f64,
    pub delta_std: f64,
}

impl RotorWindTruth {
    pub fn from_field(field: &WindField) -> Result<Self> {
        let fit = RotorFit::new(&field.grid)?;
        let n = field.n_steps;
        let mut u_eff = Vec::with_capacity(n);
        let mut delta_h = Vec::with_capacity(n);
        let mut delta_v = Vec::with_capacity(n);
        for k in 0..n {
            let (u, h, v) = fit.fit_with(|i| field.u[i * n + k]);
            u_eff.push(u);
            delta_h.push(h);
            delta_v.push(v);
        }
        Ok(Self::from_components(field.dt, u_eff, delta_h, delta_v))
    }

    pub fn from_components(dt: f64, u_eff: Vec<f64>, delta_h: Vec<f64>, delta_v: Vec<f64>) -> Self {
        let delta = delta_h.iter().zip(&delta_v).map(|(h, v)| h.hypot(*v)).collect();
        Self {
            dt,
            u_eff,
            delta_h,
            delta_v,
            delta,
        }
    }

    pub fn len(&self) -> usize {
        self.u_eff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_eff.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 * self.dt
    }

    /// `(u_eff, delta_h, delta_v)` at time `t`, linear in time, clamped.
    pub fn at(&self, t: f64) -> (f64, f64, f64) {
        let n = self.len();
        let pos = (t / self.dt).clamp(0.0, (n - 1) as f64);
        let k0 = (pos.floor() as usize).min(n - 1);
        let k1 = (k0 + 1).min(n - 1);
        let a = pos - k0 as f64;
        let lerp = |s: &[f64]| s[k0] + a * (s[k1] - s[k0]);
        (lerp(&self.u_eff), lerp(&self.delta_h), lerp(&self.delta_v))
    }

    /// Segment statistics over samples with `t0 <= t < t1`.
    pub fn statistics(&self, t0: f64, t1: f64) -> Result<TruthStatistics> {
        if !(t0 >= 0.0 && t1 <= self.duration() + 1e-9 && t1 - t0 >= 10.0 - 1e-9) {
            return Err(Error::InvalidSegment {
                t0,
                t1,
                reason: format!("needs 0 <= t0, t1 <= {} s and at least 10 s", self.duration()),
            });
        }
        let k0 = (t0 / self.dt - 1e-9).ceil() as usize;
        let k1 = ((t1 / self.dt - 1e-9).ceil() as usize).min(self.len());
        segment_statistics(&self.u_eff[k0..k1], &self.delta[k0..k1])
    }
}

/// I_eff and resultant shear statistics of aligned slices; population moments.
pub fn segment_statistics(u_eff: &[f64], delta: &[f64]) -> Result<TruthStatistics> {
    let (u_mean, u_std) = mean_std(u_eff);
    if !(u_mean > 0.0) {
        return Err(Error::NonPositiveMean(u_mean));
    }
    let (delta_mean, delta_std) = mean_std(delta);
    Ok(TruthStatistics {
        u_mean,
        u_std,
        i_eff: u_std / u_mean,
        delta_mean,
        delta_std,
    })
}

/// Two-pass mean and population standard deviation.
pub fn mean_std(x: &[f64]) -> (f64, f64) {
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Convenience wrapper: truth statistics of a field segment.
pub fn truth_statistics(field: &WindField, segment: (f64, f64)) -> Result<TruthStatistics> {
    RotorWindTruth::from_field(field)?.statistics(segment.0, segment.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windfield::TurbulenceSpec;

    fn grid() -> GridSpec {
        GridSpec::rotor_default(89.15, 119.0)
    }

    #[test]
    fn uniform_field_fit() {
        let f = WindField::from_fn(grid(), TurbulenceSpec::laminar(8.0, 0.0), 0.5, 20.0, |_, _, _| 8.0).unwrap();
        let (u, h, v) = fit_rotor_average(&f, 3.0).unwrap();
        assert!((u - 8.0).abs() < 1e-12 && h.abs() < 1e-12 && v.abs() < 1e-12);
    }

    #[test]
    fn affine_field_fit_is_exact() {
        let f = WindField::from_fn(grid(), TurbulenceSpec::laminar(10.0, 0.0), 0.5, 20.0, |_, dz, _| {
            10.0 + 0.01 * dz
        })
        .unwrap();
        let (u, h, v) = fit_rotor_average(&f, 7.25).unwrap();
        assert!((u - 10.0).abs() < 1e-12);
        assert!(h.abs() < 1e-14);
        assert!((v - 0.01).abs() < 1e-15);
    }

    #[test]
    fn collinear_disk_points_are_rank_deficient() {
        // only the centre column y = 0 falls inside the disk
        let g = GridSpec {
            ny: 3,
            nz: 5,
            extent: 178.3,
            hub_height: 300.0,
            rotor_radius: 89.15,
        };
        g.validate().unwrap();
        assert!(matches!(RotorFit::new(&g), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn pythagorean_resultant() {
        let n = 200;
        let t = RotorWindTruth::from_components(0.1, vec![10.0; n], vec![3e-2; n], vec![4e-2; n]);
        let s = t.statistics(0.0, 20.0).unwrap();
        assert!(t.delta.iter().all(|d| (d - 5e-2).abs() < 1e-15));
        assert!((s.delta_mean - 5e-2).abs() < 1e-15);
        assert!(s.delta_std < 1e-15);
        assert_eq!(s.i_eff, 0.0);
    }

    #[test]
    fn statistics_reject_bad_segments() {
        let t = RotorWindTruth::from_components(0.1, vec![10.0; 300], vec![0.0; 300], vec![0.0; 300]);
        assert!(t.statistics(0.0, 5.0).is_err());
        assert!(t.statistics(10.0, 40.0).is_err());
        let neg = RotorWindTruth::from_components(0.1, vec![-1.0; 300], vec![0.0; 300], vec![0.0; 300]);
        assert!(matches!(neg.statistics(0.0, 20.0), Err(Error::NonPositiveMean(_))));
    }
}
