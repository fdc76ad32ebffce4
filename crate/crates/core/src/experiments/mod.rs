//! Run configuration, parameter sweeps, manufactured-solution convergence
//! studies and trend summaries.

mod config;
mod mms;
mod sweep;
mod trend;

pub use config::{load_config, parse_config, ControlConfig, GridConfig, RunConfig};
pub use mms::{
    convergence_study, convergence_study_with, ConvergenceRow, ConvergenceTable, CoupledBumps, HeatKernel5d,
    ManufacturedSolution, MmsRegistry, ZeroSolution,
};
pub use sweep::{run_dir_name, sweep, SweepParam, SweepResult, SweepRow};
pub use trend::{fit_trend, Trend, TrendSummary};
