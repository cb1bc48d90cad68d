//! Test functions, error metrics, configuration and the experiment runner
//! behind the `wsvd` command-line tool.

pub mod config;
pub mod metrics;
pub mod runner;
pub mod testfn;

pub use config::{BasisKind, ExperimentConfig, PointKind, TruncationPlan};
pub use metrics::{error_stats, eval_grid, rmse};
pub use runner::{loo, run_experiment, spectrum, standard_points, write_loo, write_rows, write_spectrum, ResultRow};
pub use testfn::TestFunction;
