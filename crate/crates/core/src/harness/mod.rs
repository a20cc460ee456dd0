//! Running, measuring and checking SAM trajectories.

pub mod checks;
pub mod experiment;
pub mod figures;
pub mod fit;
pub mod metrics;
pub mod persist;
pub mod report;
pub mod run;

pub use checks::{
    check_bound_domination, check_bound_domination_on, check_floor, check_nonsmooth_escape,
    check_trapped_interval, validate_theorem_class, FloorTarget,
};
pub use experiment::{
    geometric_sweep, run_sweep, sweep_and_fit, trial_metrics, ExperimentConfig, FunctionSpec,
    ResolvedRun, Schedule, StartPoint, StartRule, SweepPoint,
};
pub use figures::{
    reproduce_figure, reproduce_with, FigureConfig, FigureId, FigureOutput, FigureRun,
};
pub use fit::{fit_power_law, RateFit};
pub use metrics::{mean_se, Metric, MetricContext};
pub use persist::{load_trajectory, persist_trajectory, trajectory_header};
pub use report::{Margin, Relation, Report};
pub use run::{
    drive, run_trajectory, run_trajectory_detailed, run_trial, Trajectory, Visit, DIVERGENCE_NORM,
};
