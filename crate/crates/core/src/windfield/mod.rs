//! Turbulent inflow on a rotor-disk grid and its rotor-averaged summary.

mod cache;
mod field;
mod grid;
mod synthesis;
mod truth;

pub use cache::{cache_key, cache_path, load_or_synthesize, read_field, write_field};
pub use field::{sigma_target, TurbulenceModel, TurbulenceSpec, WindField};
pub use grid::GridSpec;
pub use synthesis::{iec_coherence, kaimal_psd, synthesize, COHERENCE_DECREMENT, TURBULENCE_SCALE};
pub use truth::{
    fit_rotor_average, mean_std, segment_statistics, truth_statistics, RotorFit, RotorWindTruth,
    TruthStatistics,
};
