//! Scenario runner reproducing the reference experiments end-to-end.

mod report;
mod scenarios;

pub use report::{
    emit_report, read_samples_csv, write_samples_csv, CheckResult, ConfigEcho, OutputFormat,
    RunReport,
};
pub use scenarios::{list_experiments, run_scenario, Scenario};
