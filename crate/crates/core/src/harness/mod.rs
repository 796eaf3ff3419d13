//! Experiment orchestration: temporal convergence studies for problems with
//! an exact solution, Merton pricing studies against the series reference,
//! kernel diagnostics, and their CSV / config plumbing.

mod config;
mod csv_io;
mod kernel_report;
mod studies;

pub use config::ConfigFile;
pub use csv_io::{
    read_convergence_csv, read_merton_csv, write_convergence_csv, write_kernel_table_csv, write_merton_csv,
};
pub use kernel_report::{kernel_report, KernelReport};
pub use studies::{
    convergence_study, merton_study, observed_orders, ConvergenceReport, ConvergenceRow, ErrorMeasure, MertonReport,
    MertonRow, StudySettings, MAX_DEFAULT_N, MAX_DEFAULT_M,
};
