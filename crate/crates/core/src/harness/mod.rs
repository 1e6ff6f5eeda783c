//! Tuning curves, cross-validation, the intercept experiment and the
//! dataset verification suite.

pub mod cv;
pub mod experiment;
pub mod path;
pub mod plot;
pub mod verify;

pub use cv::{cross_validate, fold_assignment, CvResult};
pub use experiment::{intercept_experiment, ExperimentConfig, ExperimentSummary, GridSpec};
pub use path::{default_grid, log_grid, tuning_path, PathOptions, TuningCurve, TuningRow};
pub use plot::{emit_experiment_data, emit_plot_data, PlotManifest};
pub use verify::{verify_dataset, VerifyReport};
