//! Baseline variable-speed pitch-regulated control and the turbulence-based
//! load-alleviation layer.

mod baseline;
mod buffer;
mod command;
mod supervisor;
mod tlac;
mod trim;

pub use baseline::{BaselineConfig, BaselineController, Measurements, Setpoints, SCHEDULE_KNEE_DEG};
pub use buffer::SlidingStats;
pub use command::{ControlCommand, ControlMode};
pub use supervisor::{Controller, ControllerConfig};
pub use tlac::{
    apply_derate, derate_fraction, schedule_gains, DerateStrategy, ThresholdEntry, ThresholdTable, TlacConfig,
    TlacLayer, TlacOutput,
};
pub use trim::steady_state;
