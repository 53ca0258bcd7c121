//! File formats, the condition report and the Monte Carlo engine.

pub mod analysis;
pub mod io;
pub mod montecarlo;

pub use analysis::{analyze, verdict, AnalysisReport, ComponentReport, Verdict};
pub use montecarlo::{
    montecarlo, run_pipeline, trial_seed, wilson_interval, MonteCarloConfig, MonteCarloReport, PipelineRun,
    TrialRecord, CSV_HEADER, Z95,
};
