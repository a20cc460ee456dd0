use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, FunctionParams, Problem, StochasticObjective};
use crate::error::{Result, SamError};
use crate::optimizers::OptimizerConfig;
use crate::schedules::{step_size, ScheduleInputs, TheoremId};

use super::fit::{fit_power_law, RateFit};
use super::metrics::{mean_se, Metric, MetricContext};
use super::run::run_trial;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub id: String,
    #[serde(default)]
    pub params: FunctionParams,
    /// Turns a deterministic entry into the mixture `f(x) +- s sum_j x_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_noise: Option<f64>,
}

impl FunctionSpec {
    pub fn new(id: impl Into<String>, params: FunctionParams) -> Self {
        FunctionSpec {
            id: id.into(),
            params,
            linear_noise: None,
        }
    }

    pub fn with_linear_noise(mut self, s: f64) -> Self {
        self.linear_noise = Some(s);
        self
    }

    pub fn build(&self) -> Result<Problem> {
        let p = catalog::build(&self.id, &self.params)?;
        match (self.linear_noise, p) {
            (None, p) => Ok(p),
            (Some(s), Problem::Deterministic(f)) => {
                Ok(StochasticObjective::with_linear_noise(f, s)?.into())
            }
            (Some(_), Problem::Stochastic(_)) => Err(SamError::invalid(
                "linear_noise",
                "only applies to deterministic catalog entries",
            )),
        }
    }
}

/// How the step size is chosen for each horizon `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Schedule {
    /// `optimizer.eta` for every `T`.
    #[default]
    Constant,
    /// The step size prescribed by a convergence theorem.
    Theorem { theorem: TheoremId },
    /// `eta = 1 / (2 mu T)`.
    InverseHorizon { mu: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartRule {
    /// The catalog's default starting point.
    Default,
    /// `x0 = eta beta rho / (4 - eta beta)`, the 2-cycle of SAM on
    /// `beta x^2 / 4`.
    Oscillation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartPoint {
    Point(Vec<f64>),
    Rule(StartRule),
}

impl Default for StartPoint {
    fn default() -> Self {
        StartPoint::Rule(StartRule::Default)
    }
}

/// A sweep over horizons, stored as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub function: FunctionSpec,
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub x0: StartPoint,
    pub metric: Metric,
    pub sweep: Vec<usize>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

/// Powers of two `2^lo ..= 2^hi`.
pub fn geometric_sweep(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

/// Everything needed to run one horizon of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedRun {
    pub t: usize,
    pub x0: Vec<f64>,
    pub optimizer: OptimizerConfig,
    pub delta: f64,
}

/// Mean metric at one horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t: usize,
    pub eta: f64,
    pub mean: f64,
    pub se: f64,
    pub trials: usize,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SamError::io(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(SamError::invalid("trials", "must be >= 1"));
        }
        if self.sweep.is_empty() {
            return Err(SamError::invalid("sweep", "must not be empty"));
        }
        if self.sweep.windows(2).any(|w| w[0] >= w[1]) || self.sweep[0] == 0 {
            return Err(SamError::invalid(
                "sweep",
                "must be strictly increasing positive horizons",
            ));
        }
        if let (Schedule::Theorem { .. }, StartPoint::Rule(StartRule::Oscillation)) =
            (&self.schedule, &self.x0)
        {
            return Err(SamError::invalid(
                "x0",
                "the oscillation start depends on eta and cannot be combined with a theorem schedule",
            ));
        }
        if let Schedule::InverseHorizon { mu } = self.schedule {
            if !(mu > 0.0) {
                return Err(SamError::invalid("schedule.mu", "must be > 0"));
            }
        }
        self.optimizer.validate()
    }

    pub fn metric_context(&self, problem: &Problem) -> MetricContext {
        MetricContext {
            f_star: problem.meta().f_star,
            beta: problem.meta().beta,
            rho: self.optimizer.rho,
        }
    }

    /// Schedule inputs at horizon `t` from `x0`.
    pub fn schedule_inputs(
        &self,
        problem: &Problem,
        x0: &[f64],
        t: usize,
    ) -> Result<ScheduleInputs> {
        let meta = problem.meta();
        let delta = problem.mean().value(x0) - meta.f_star;
        if !delta.is_finite() {
            return Err(SamError::Precondition(format!(
                "Delta = f(x0) - f* is not finite (f* = {})",
                meta.f_star
            )));
        }
        Ok(ScheduleInputs {
            beta: meta.beta,
            mu: meta.mu,
            sigma: problem.sigma(),
            rho: self.optimizer.rho,
            delta: delta.max(0.0),
            t,
            lipschitz: meta.lipschitz,
        })
    }

    /// Resolves the step size and starting point for horizon `t`.
    pub fn resolve(&self, problem: &Problem, t: usize) -> Result<ResolvedRun> {
        let meta = problem.meta();
        let mut opt = self.optimizer.clone();
        opt.seed = self.seed;
        let eta = match &self.schedule {
            Schedule::Constant => opt.eta,
            Schedule::InverseHorizon { mu } => 1.0 / (2.0 * mu * t as f64),
            Schedule::Theorem { theorem } => {
                let x0 = self.start_point(problem, f64::NAN)?;
                step_size(*theorem, &self.schedule_inputs(problem, &x0, t)?)?
            }
        };
        opt.eta = eta;
        let x0 = self.start_point(problem, eta)?;
        let delta = problem.mean().value(&x0) - meta.f_star;
        Ok(ResolvedRun {
            t,
            x0,
            optimizer: opt,
            delta,
        })
    }

    fn start_point(&self, problem: &Problem, eta: f64) -> Result<Vec<f64>> {
        let x0 = match &self.x0 {
            StartPoint::Point(v) => v.clone(),
            StartPoint::Rule(StartRule::Default) => {
                catalog::default_x0(&self.function.id, &self.function.params)?
            }
            StartPoint::Rule(StartRule::Oscillation) => {
                let b = problem.meta().beta;
                let eb = eta * b;
                if !(eb < 4.0) {
                    return Err(SamError::invalid(
                        "x0",
                        "oscillation start needs eta beta < 4",
                    ));
                }
                vec![eb * self.optimizer.rho / (4.0 - eb)]
            }
        };
        if x0.len() != problem.dim() {
            return Err(SamError::Dimension {
                expected: problem.dim(),
                got: x0.len(),
            });
        }
        Ok(x0)
    }

    /// Trials actually run: deterministic setups need only one.
    pub fn effective_trials(&self, problem: &Problem) -> usize {
        if self.optimizer.variant.is_stochastic() && problem.as_stochastic().is_some() {
            self.trials
        } else {
            1
        }
    }
}

/// Runs `trials` trials in parallel and evaluates `metric` on each.
pub fn trial_metrics(
    problem: &Problem,
    run: &ResolvedRun,
    metric: Metric,
    ctx: &MetricContext,
    trials: usize,
) -> Result<Vec<f64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let tr = run_trial(problem, &run.x0, &run.optimizer, run.t, k, false)?;
            metric.evaluate(&tr, ctx)
        })
        .collect()
}

/// Runs every horizon of the sweep and averages the metric over trials.
pub fn run_sweep(exp: &ExperimentConfig) -> Result<Vec<SweepPoint>> {
    exp.validate()?;
    let problem = exp.function.build()?;
    let ctx = exp.metric_context(&problem);
    let trials = exp.effective_trials(&problem);
    exp.sweep
        .iter()
        .map(|&t| {
            let run = exp.resolve(&problem, t)?;
            let vals = trial_metrics(&problem, &run, exp.metric, &ctx, trials)?;
            let (mean, se) = mean_se(&vals);
            Ok(SweepPoint {
                t,
                eta: run.optimizer.eta,
                mean,
                se,
                trials,
            })
        })
        .collect()
}

/// Sweeps and fits a power law to the trial-averaged metric.
pub fn sweep_and_fit(exp: &ExperimentConfig) -> Result<RateFit> {
    let pts = run_sweep(exp)?;
    fit_power_law(&pts.iter().map(|p| (p.t as f64, p.mean)).collect::<Vec<_>>())
}
