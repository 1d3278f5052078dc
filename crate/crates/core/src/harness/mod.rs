//! Experiment plumbing: the exhaustive oracle, seed sweeps and file output.

mod config;
mod experiment;
mod oracle;
mod output;

pub use config::{ExperimentSpec, Variant, ABLATION_VARIANTS, PAPER_SEED_COUNT};
pub use experiment::{
    median, paired_comparisons, run_experiment, run_grape, summarize, ExperimentReport, GrapeReport,
    PairedComparison, RunOutcome, SummaryRow,
};
pub use oracle::{brute_force_optimum, OracleResult, ORACLE_LIMIT};
pub use output::{
    curve_csv, format_sig12, grape_controls_csv, grape_cost_csv, write_manifest, FileEntry, CURVE_HEADER,
    GRAPE_CONTROLS_HEADER, GRAPE_COST_HEADER,
};
