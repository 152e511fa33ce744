//! Reduced-order aero-servo simulation of turbulence-based load alleviation
//! control (TLAC) for a 10 MW class wind turbine.
//!
//! The pipeline runs end to end:
//!
//! * [`windfield`] synthesizes turbulent inflow on a rotor-disk grid and fits
//!   the rotor-averaged wind speed and linear shears by least squares.
//! * [`turbine`] is a quasi-steady rotor with a rigid drivetrain, a single
//!   fore-aft tower mode and per-blade root out-of-plane moments.
//! * [`estimator`] reconstructs rotor wind speed and shears from blade-root
//!   moments through a thrust-balance inversion and a multiblade transform.
//! * [`controller`] holds the baseline torque/pitch controller and the
//!   shear-statistics derating layer.
//! * [`analysis`] provides coherence, quantile, exceedance and error
//!   statistics.
//! * [`harness`] builds the load-case matrix, runs cases and campaigns and
//!   persists the results.

pub mod analysis;
pub mod controller;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod turbine;
pub mod windfield;

pub use error::{Error, Result};
