//! Benchmark drivers behind the `qlga` command-line tool: run
//! configurations, convergence sweeps with slope fitting, the
//! second-quantized equivalence suite, and complexity reports.

pub mod config;
pub mod convergence;
pub mod report;
pub mod svg;

pub use config::{parse_config, EpsilonPolicy, InitialKind, InitialSpec, OutputFormat, RunConfig};
pub use convergence::{fit_slope, run_convergence, ConvergenceRecord, ConvergenceReport};
pub use report::{
    complexity_csv, complexity_table, convergence_csv, norm_observer_csv, run_equivalence,
    run_single, EquivCheck, EquivReport,
};
