//! Coherence, error histograms, segment statistics, quantile thresholds and
//! exceedance curves.

mod segments;
mod series;
mod spectral;
mod stats;

pub use segments::{
    calibrated_estimates, quantile_threshold, segment_stats, signed_extreme, trigger_fraction, window_stats,
    EstimateStatistics, SegmentRow, WindowStat,
};
pub use series::CaseSeries;
pub use spectral::{coherence, coherence_half_crossing, CoherenceCurve, CrossSpectrum, SpectralConfig};
pub use stats::{error_histogram, exceedance, quantile, ErrorHistogram, ExceedanceCurve};
