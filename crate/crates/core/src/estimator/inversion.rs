//! Blade-equivalent wind from a root out-of-plane moment.

use crate::turbine::{blade_moment, CoefficientSurface, TurbineParams};
use crate::{Error, Result};

/// Search interval for the blade wind, m/s.
pub const WIND_BRACKET: (f64, f64) = (0.5, 40.0);

const MAX_ITER: usize = 100;

/// Solve `M(U) = m_oop` for `U` in [`WIND_BRACKET`].
///
/// Returns `None` when the residual does not change sign over the bracket.
pub fn invert_blade_wind(
    m_oop: f64,
    pitch: f64,
    rotor_speed: f64,
    params: &TurbineParams,
    surfaces: &CoefficientSurface,
) -> Option<f64> {
    if !(m_oop > 0.0) || !(rotor_speed > 0.0) || !pitch.is_finite() {
        return None;
    }
    let g = |u: f64| blade_moment(params, surfaces, pitch, rotor_speed, u) - m_oop;
    let tol = 1e-6 * m_oop;
    let (mut a, mut b) = WIND_BRACKET;
    let (mut ga, mut gb) = (g(a), g(b));
    if ga.abs() < tol {
        return Some(a);
    }
    if gb.abs() < tol {
        return Some(b);
    }
    if ga.signum() == gb.signum() {
        return None;
    }
    for _ in 0..MAX_ITER {
        let width = b - a;
        let mut x = b - gb * (b - a) / (gb - ga);
        // fall back to bisection when the secant leaves the bracket
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let gx = g(x);
        if gx.abs() < tol {
            return Some(x);
        }
        if gx.signum() == ga.signum() {
            a = x;
            ga = gx;
        } else {
            b = x;
            gb = gx;
        }
        // a one-sided secant stalls; force a bisection step
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let gm = g(m);
            if gm.abs() < tol {
                return Some(m);
            }
            if gm.signum() == ga.signum() {
                a = m;
                ga = gm;
            } else {
                b = m;
                gb = gm;
            }
        }
    }
    Some(0.5 * (a + b))
}

/// Check that the blade moment increases strictly with wind speed wherever it
/// is nonzero, over the bracket
/// for every tabulated pitch angle and a spread of rotor speeds.
pub fn audit_monotone(params: &TurbineParams, surfaces: &CoefficientSurface) -> Result<()> {
    let speeds: Vec<f64> = (0..=8)
        .map(|k| params.min_rotor_speed * 0.5 + k as f64 / 8.0 * (params.rated_rotor_speed * 1.3 - params.min_rotor_speed * 0.5))
        .collect();
    let n = 400;
    for &pitch_deg in surfaces.pitch_grid_deg() {
        let pitch = pitch_deg.to_radians();
        for &omega in &speeds {
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=n {
                let u = WIND_BRACKET.0 + (WIND_BRACKET.1 - WIND_BRACKET.0) * k as f64 / n as f64;
                let m = blade_moment(params, surfaces, pitch, omega, u);
                // identically zero thrust (feathered, very low wind) is allowed to stay flat
                if !(m > prev || (m == 0.0 && prev <= 0.0)) {
                    return Err(Error::Table(format!(
                        "blade moment not increasing in wind at pitch {pitch_deg} deg, rotor speed {omega:.3} rad/s, U = {u:.2} m/s"
                    )));
                }
                prev = m;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (TurbineParams, CoefficientSurface) {
        (TurbineParams::default(), CoefficientSurface::shipped())
    }

    #[test]
    fn forward_inverse_round_trip() {
        let (p, s) = setup();
        let m = blade_moment(&p, &s, 0.0, 0.9, 10.0);
        let u = invert_blade_wind(m, 0.0, 0.9, &p, &s).unwrap();
        assert!((u - 10.0).abs() < 1e-4);
    }

    #[test]
    fn tiny_moment_is_degenerate() {
        let (p, s) = setup();
        assert!(invert_blade_wind(1e-6, 0.0, 0.9, &p, &s).is_none());
        assert!(invert_blade_wind(0.0, 0.0, 0.9, &p, &s).is_none());
    }

    #[test]
    fn shipped_table_passes_the_audit() {
        let (p, s) = setup();
        audit_monotone(&p, &s).unwrap();
    }

    #[test]
    fn non_monotone_table_fails_the_audit() {
        let p = TurbineParams::default();
        let s = CoefficientSurface::new(
            vec![0.0, 40.0],
            vec![1.0, 20.0],
            vec![0.0, 5.0, 0.0, 5.0],
            vec![0.0; 4],
        )
        .unwrap();
        assert!(audit_monotone(&p, &s).is_err());
    }
}
