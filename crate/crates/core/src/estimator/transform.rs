//! Multiblade transform of blade winds into rotor average and shears.

use crate::turbine::blade_azimuth;

/// `(u_eff, delta_v, delta_h)` from the three blade winds at azimuth `azimuth`.
pub fn nonrotating_transform(u_b: [f64; 3], azimuth: f64, r_eq: f64) -> (f64, f64, f64) {
    let k = 2.0 / (3.0 * r_eq);
    let mut u = 0.0;
    let mut dv = 0.0;
    let mut dh = 0.0;
    for (i, &ub) in u_b.iter().enumerate() {
        let (s, c) = blade_azimuth(azimuth, i).sin_cos();
        u += ub / 3.0;
        dv += k * c * ub;
        dh -= k * s * ub;
    }
    (u, dv, dh)
}
