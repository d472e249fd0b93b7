//! Experiment plumbing: datasets, partitions, the success criterion, the
//! budget search and result emission.

mod budget;
mod dataset;
mod partition;
mod results;
mod success;

pub use budget::{
    budget_search, evaluate_rung, resolve_delta, run_fixed, run_trial, summarize, trial_run,
    BudgetSearchSpec, DeltaReading, InstanceSource, Ladder, RungOutcome, TargetRate, TrialOutcome,
};
pub use dataset::{load_csv, write_csv, Dataset};
pub use partition::{dataset_instance, partition, Partition, PartitionSpec, PartitionStrategy};
pub use results::{
    emit_results, parse_results, write_diagnostics, write_results, DiagnosticsRun, ResultRow,
    DIAGNOSTICS_HEADER, NOT_FOUND, RESULT_HEADER,
};
pub use success::{evaluate_success, player_errors, HOLDOUT_DRAWS};
