use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SamError};
use crate::schedules::TheoremId;

use super::run::Trajectory;

/// Scalar summaries of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// `min_{0 <= t <= T} f(x_t) - f*`
    MinSuboptimality,
    /// `(1/T) sum_{t < T} ||grad f(x_t)||^2`
    MeanSqGradNorm,
    /// `f(x_T) - f*`
    FinalSuboptimality,
    /// `min_{0 <= t <= T} ||grad f(x_t)||`
    MinGradNorm,
    /// `(1/T) sum_{t < T} (||grad f(x_t)|| - beta rho)^2`
    MeanSqGradGap,
}

/// Constants some metrics need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricContext {
    pub f_star: f64,
    pub beta: f64,
    pub rho: f64,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::MinSuboptimality,
        Metric::MeanSqGradNorm,
        Metric::FinalSuboptimality,
        Metric::MinGradNorm,
        Metric::MeanSqGradGap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::MinSuboptimality => "min-suboptimality",
            Metric::MeanSqGradNorm => "mean-sq-grad-norm",
            Metric::FinalSuboptimality => "final-suboptimality",
            Metric::MinGradNorm => "min-grad-norm",
            Metric::MeanSqGradGap => "mean-sq-grad-gap",
        }
    }

    /// The quantity each convergence bound controls.
    pub fn for_theorem(id: TheoremId) -> Metric {
        match id {
            TheoremId::Thm31 => Metric::MinSuboptimality,
            TheoremId::Thm41 => Metric::FinalSuboptimality,
            TheoremId::Thm47 => Metric::MeanSqGradGap,
            TheoremId::Thm33 | TheoremId::Thm34 | TheoremId::Thm44 | TheoremId::Thm46 => {
                Metric::MeanSqGradNorm
            }
        }
    }

    pub fn needs_f_star(self) -> bool {
        matches!(self, Metric::MinSuboptimality | Metric::FinalSuboptimality)
    }

    /// Evaluates on raw series of `f(x_t)` and `||grad f(x_t)||`, `t = 0..T`.
    pub fn evaluate_series(
        self,
        f_values: &[f64],
        grad_norms: &[f64],
        ctx: &MetricContext,
    ) -> Result<f64> {
        if f_values.is_empty() || f_values.len() != grad_norms.len() {
            return Err(SamError::Precondition(
                "empty or inconsistent series".into(),
            ));
        }
        if self.needs_f_star() && !ctx.f_star.is_finite() {
            return Err(SamError::Precondition(format!(
                "{self} needs a finite f*, got {}",
                ctx.f_star
            )));
        }
        let t = f_values.len() - 1;
        let head = &grad_norms[..t.max(1).min(grad_norms.len())];
        Ok(match self {
            Metric::MinSuboptimality => {
                f_values.iter().fold(f64::INFINITY, |m, &v| m.min(v)) - ctx.f_star
            }
            Metric::FinalSuboptimality => f_values[t] - ctx.f_star,
            Metric::MinGradNorm => grad_norms.iter().fold(f64::INFINITY, |m, &v| m.min(v)),
            Metric::MeanSqGradNorm => head.iter().map(|g| g * g).sum::<f64>() / head.len() as f64,
            Metric::MeanSqGradGap => {
                let br = ctx.beta * ctx.rho;
                head.iter().map(|g| (g - br) * (g - br)).sum::<f64>() / head.len() as f64
            }
        })
    }

    pub fn evaluate(self, traj: &Trajectory, ctx: &MetricContext) -> Result<f64> {
        self.evaluate_series(&traj.f_values, &traj.grad_norms, ctx)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = SamError;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| SamError::UnknownId {
                kind: "metric",
                id: s.to_string(),
            })
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
