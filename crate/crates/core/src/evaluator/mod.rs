//! Execution replay, coverage metrics, predictor F1 and benchmarks.

mod benchmark;
mod execute;
mod metrics;

pub use benchmark::{
    benchmark, benchmark_noise_levels, trial_noise_seed, trial_plan_seed, BenchmarkTable,
    SummaryRow, TrialRow,
};
pub use execute::{execute_and_evaluate, CoverageReport, NoiseModel, DEFAULT_DEFICIT_FACTOR};
pub use metrics::{f1_contact, pixel_coverage, Confusion, F1Score};
