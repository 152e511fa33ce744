//! Case matrix, closed-loop simulation and campaign orchestration.

mod campaign;
mod case;
mod config;
mod persist;
mod run;

pub use campaign::{
    analysis_text, calibrate_campaign, coherence_report, compare, estimate_windows, partition_failed, run_campaign,
    run_full_campaign, summary_table, Calibration, CampaignOutcome, ChannelComparison, CoherenceReport,
    ComparisonReport, TriggerRow, CHANNELS, MIN_BIN_WINDOWS, THRESHOLD_QUANTILE,
};
pub use config::RunConfig;
pub use case::{build_matrix, CampaignConfig, DlcCase, Variant};
pub use persist::{case_dir, load_case, load_cases, save_case, write_atomic};
pub use run::{run_case, simulate, CaseResult, CaseStatus, CaseSummary, RunContext, SEGMENT_LENGTH};
