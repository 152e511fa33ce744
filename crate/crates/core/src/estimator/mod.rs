//! Rotor-averaged wind speed and shear estimated from blade root moments.

mod calibration;
mod filter;
mod inversion;
mod online;
mod transform;

pub use calibration::{calibrate, BiasEntry, BiasTable, CalibrationRun, DEFAULT_BINS};
pub use filter::{lowpass, LowPass};
pub use inversion::{audit_monotone, invert_blade_wind, WIND_BRACKET};
pub use online::{EstimatorConfig, EstimatorOutput, WindEstimate, WindEstimator};
pub use transform::nonrotating_transform;
