//! Frequency-domain (Veers) synthesis of turbulent inflow.
//!
//! Each velocity component gets a Kaimal one-point spectrum and the IEC
//! exponential coherence between grid points. The cross-spectral matrix is
//! factorised per frequency and driven with random phases; an inverse FFT per
//! point produces the time series. The field is periodic in the record length
//! and frozen in time at the rotor plane (no longitudinal transport).

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{num_complex::Complex, FftPlanner};

use super::field::{sigma_target, steps_for, TurbulenceSpec, WindField};
use super::grid::GridSpec;
use crate::{Error, Result};

/// IEC longitudinal turbulence scale parameter for hub heights above 60 m.
pub const TURBULENCE_SCALE: f64 = 42.0;
/// Coherence decrement.
pub const COHERENCE_DECREMENT: f64 = 12.0;

/// Off-diagonal coherence below which the matrix is taken as the identity.
const COHERENCE_FLOOR: f64 = 1e-10;

/// Kaimal one-point spectrum for a component with integral length `scale`, m²/s² per Hz.
pub fn kaimal_psd(f: f64, sigma: f64, scale: f64, mean_wind: f64) -> f64 {
    let t = scale / mean_wind;
    4.0 * sigma * sigma * t / (1.0 + 6.0 * f * t).powf(5.0 / 3.0)
}

/// IEC exponential coherence between two points `r` metres apart.
pub fn iec_coherence(f: f64, r: f64, mean_wind: f64) -> f64 {
    let lc = 8.1 * TURBULENCE_SCALE;
    let a = f * r / mean_wind;
    let b = 0.12 * r / lc;
    (-COHERENCE_DECREMENT * (a * a + b * b).sqrt()).exp()
}

struct Component {
    sigma: f64,
    scale: f64,
}

pub fn synthesize(grid: &GridSpec, turb: &TurbulenceSpec, dt: f64, duration: f64) -> Result<WindField> {
    grid.validate()?;
    turb.validate()?;
    if duration < 60.0 {
        return Err(Error::InvalidArgument(format!(
            "duration {duration} s is shorter than 60 s"
        )));
    }
    let n = steps_for(dt, duration)?;
    let npts = grid.n_points();
    let offsets = grid.offsets();
    let v_hub = turb.mean_wind;

    let sigma_u = sigma_target(turb);
    let components = [
        Component {
            sigma: sigma_u,
            scale: 8.1 * TURBULENCE_SCALE,
        },
        Component {
            sigma: 0.8 * sigma_u,
            scale: 2.7 * TURBULENCE_SCALE,
        },
        Component {
            sigma: 0.5 * sigma_u,
            scale: 0.66 * TURBULENCE_SCALE,
        },
    ];

    let mut fluct = vec![vec![0.0; npts * n]; 3];

    if sigma_u > 0.0 {
        let df = 1.0 / (n as f64 * dt);
        let kmax = (n - 1) / 2;

        // Discrete spectra rescaled so each component carries exactly sigma².
        let amplitudes: Vec<Vec<f64>> = components
            .iter()
            .map(|c| {
                let s: Vec<f64> = (1..=kmax)
                    .map(|k| kaimal_psd(k as f64 * df, c.sigma, c.scale, v_hub))
                    .collect();
                let total: f64 = s.iter().sum::<f64>() * df;
                let scale = c.sigma * c.sigma / total;
                s.iter().map(|sk| (2.0 * sk * scale * df).sqrt()).collect()
            })
            .collect();

        let mut dist = vec![0.0; npts * npts];
        let mut r_min = f64::INFINITY;
        for i in 0..npts {
            for j in 0..npts {
                let r = (offsets[i].0 - offsets[j].0).hypot(offsets[i].1 - offsets[j].1);
                dist[i * npts + j] = r;
                if i != j {
                    r_min = r_min.min(r);
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(turb.seed);
        let mut spectra = vec![vec![Complex::new(0.0, 0.0); npts * n]; 3];
        let mut cos_p = vec![0.0; npts];
        let mut sin_p = vec![0.0; npts];

        for k in 1..=kmax {
            let f = k as f64 * df;
            let factor = if iec_coherence(f, r_min, v_hub) < COHERENCE_FLOOR {
                None
            } else {
                let coh = DMatrix::from_fn(npts, npts, |i, j| {
                    if i == j {
                        1.0
                    } else {
                        iec_coherence(f, dist[i * npts + j], v_hub)
                    }
                });
                Some(cholesky_lower(coh)?)
            };

            for (c, spec) in spectra.iter_mut().enumerate() {
                for p in 0..npts {
                    let theta = rng.random::<f64>() * TAU;
                    cos_p[p] = theta.cos();
                    sin_p[p] = theta.sin();
                }
                let a = amplitudes[c][k - 1];
                for p in 0..npts {
                    let (re, im) = match &factor {
                        Some(l) => {
                            let mut re = 0.0;
                            let mut im = 0.0;
                            for q in 0..=p {
                                let lpq = l[(p, q)];
                                re += lpq * cos_p[q];
                                im += lpq * sin_p[q];
                            }
                            (re, im)
                        }
                        None => (cos_p[p], sin_p[p]),
                    };
                    spec[p * n + k] = Complex::new(a * re, a * im);
                }
            }
        }

        let mut planner = FftPlanner::<f64>::new();
        let ifft = planner.plan_fft_inverse(n);
        for (c, spec) in spectra.iter_mut().enumerate() {
            for p in 0..npts {
                let row = &mut spec[p * n..(p + 1) * n];
                ifft.process(row);
                for (dst, src) in fluct[c][p * n..(p + 1) * n].iter_mut().zip(row.iter()) {
                    *dst = src.re;
                }
            }
        }
    }

    let (sin_d, cos_d) = turb.direction.to_radians().sin_cos();
    let mut u = vec![0.0; npts * n];
    let mut v = vec![0.0; npts * n];
    let mut w = vec![0.0; npts * n];
    for (p, &(_, dz)) in offsets.iter().enumerate() {
        let z = grid.hub_height + dz;
        let mean = v_hub * (z / grid.hub_height).powf(turb.shear_exponent);
        for k in 0..n {
            let idx = p * n + k;
            let uw = mean + fluct[0][idx];
            let vw = fluct[1][idx];
            u[idx] = uw * cos_d - vw * sin_d;
            v[idx] = uw * sin_d + vw * cos_d;
            w[idx] = fluct[2][idx];
        }
    }

    Ok(WindField {
        grid: *grid,
        turbulence: *turb,
        dt,
        n_steps: n,
        u,
        v,
        w,
    })
}

fn cholesky_lower(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if let Some(c) = m.clone().cholesky() {
        return Ok(c.unpack());
    }
    // near-singular at very low frequency; regularise the diagonal slightly
    let jittered = m + DMatrix::identity(n, n) * 1e-10;
    jittered
        .cholesky()
        .map(|c| c.unpack())
        .ok_or_else(|| Error::InvalidArgument("coherence matrix is not positive definite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windfield::TurbulenceModel;

    fn small_grid() -> GridSpec {
        GridSpec::new(7, 7, 89.15, 119.0, 89.15).unwrap()
    }

    #[test]
    fn laminar_uniform_inflow_is_constant() {
        let g = small_grid();
        let t = TurbulenceSpec::laminar(12.0, 0.0);
        let f = synthesize(&g, &t, 0.2, 60.0).unwrap();
        assert!(f.u.iter().all(|&x| x == 12.0));
        assert!(f.v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn laminar_power_law_profile() {
        let g = small_grid();
        let t = TurbulenceSpec::laminar(11.0, 0.2);
        let f = synthesize(&g, &t, 0.5, 60.0).unwrap();
        let offsets = g.offsets();
        let (xs, ys): (Vec<f64>, Vec<f64>) = offsets
            .iter()
            .enumerate()
            .map(|(p, &(_, dz))| ((g.hub_height + dz).ln(), f.u_series(p)[3].ln()))
            .unzip();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        assert!((sxy / sxx - 0.2).abs() < 1e-6);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let g = small_grid();
        let t = TurbulenceSpec::class_a(TurbulenceModel::Ntm, 12.0, 42);
        let a = synthesize(&g, &t, 0.25, 120.0).unwrap();
        let b = synthesize(&g, &t, 0.25, 120.0).unwrap();
        assert_eq!(a, b);
        let mut t2 = t;
        t2.seed = 43;
        let c = synthesize(&g, &t2, 0.25, 120.0).unwrap();
        assert_ne!(a.u, c.u);
    }

    #[test]
    fn ensemble_std_matches_target() {
        let g = small_grid();
        let hub = g.hub_index();
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let mut count = 0.0;
        for seed in 0..20 {
            let t = TurbulenceSpec::class_a(TurbulenceModel::Ntm, 12.0, seed);
            let f = synthesize(&g, &t, 0.25, 600.0).unwrap();
            for &x in f.u_series(hub) {
                sum += x;
                sum2 += x * x;
                count += 1.0;
            }
        }
        let mean = sum / count;
        let std = (sum2 / count - mean * mean).sqrt();
        let target = sigma_target(&TurbulenceSpec::class_a(TurbulenceModel::Ntm, 12.0, 0));
        assert!((std / target - 1.0).abs() < 0.15, "std {std} target {target}");
    }

    #[test]
    fn neighbouring_points_are_more_coherent_than_distant_ones() {
        let g = GridSpec::new(9, 9, 89.15, 119.0, 89.15).unwrap();
        let t = TurbulenceSpec::class_a(TurbulenceModel::Ntm, 12.0, 5);
        let f = synthesize(&g, &t, 0.25, 600.0).unwrap();
        let corr = |a: &[f64], b: &[f64]| {
            let n = a.len() as f64;
            let ma = a.iter().sum::<f64>() / n;
            let mb = b.iter().sum::<f64>() / n;
            let c: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
            let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
            let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
            c / (va * vb).sqrt()
        };
        let hub = f.u_series(g.index(4, 4));
        let near = corr(hub, f.u_series(g.index(5, 4)));
        let far = corr(hub, f.u_series(g.index(8, 4)));
        assert!(near > far, "near {near} far {far}");
    }

    #[test]
    fn short_duration_is_rejected() {
        let g = small_grid();
        let t = TurbulenceSpec::laminar(10.0, 0.2);
        assert!(synthesize(&g, &t, 0.1, 30.0).is_err());
    }
}
