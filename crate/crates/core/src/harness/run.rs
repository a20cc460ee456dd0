use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::catalog::Problem;
use crate::error::{Result, SamError};
use crate::optimizers::{step, OptimizerConfig, SamRng, StepRecord};
use crate::vecops::norm;

/// Iterates whose norm exceeds this abort the run.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Iterates `x_0..x_T` with the mean function's value and gradient norm.
///
/// `step_records`, `config` and `function_id` are absent for trajectories
/// loaded from CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub iterates: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub step_records: Option<Vec<StepRecord>>,
    pub config: Option<OptimizerConfig>,
    pub function_id: Option<String>,
}

impl Trajectory {
    /// Number of steps `T`.
    pub fn steps(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn dim(&self) -> usize {
        self.iterates.first().map_or(0, Vec::len)
    }

    pub fn final_iterate(&self) -> &[f64] {
        self.iterates.last().map_or(&[], Vec::as_slice)
    }

    pub fn with_function_id(mut self, id: impl Into<String>) -> Self {
        self.function_id = Some(id.into());
        self
    }

    /// Checks length consistency and finiteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.iterates.len();
        if n == 0 || self.f_values.len() != n || self.grad_norms.len() != n {
            return Err(SamError::Precondition(format!(
                "inconsistent trajectory lengths: {} iterates, {} values, {} norms",
                n,
                self.f_values.len(),
                self.grad_norms.len()
            )));
        }
        if let Some(r) = &self.step_records {
            if r.len() + 1 != n {
                return Err(SamError::Precondition(format!(
                    "{} step records for {} steps",
                    r.len(),
                    n - 1
                )));
            }
        }
        let d = self.dim();
        for (t, x) in self.iterates.iter().enumerate() {
            if x.len() != d {
                return Err(SamError::Dimension {
                    expected: d,
                    got: x.len(),
                });
            }
            if !x.iter().all(|v| v.is_finite())
                || !self.f_values[t].is_finite()
                || !self.grad_norms[t].is_finite()
            {
                return Err(SamError::NonFinite {
                    context: format!("trajectory at t = {t}"),
                });
            }
        }
        Ok(())
    }
}

/// State passed to a [`drive`] visitor after every iterate, starting with
/// `x_0`.
pub struct Visit<'a> {
    pub t: usize,
    pub x: &'a [f64],
    pub f: f64,
    pub grad_norm: f64,
    pub record: Option<&'a StepRecord>,
}

/// Runs `T` steps of trial `trial`, calling `visit` on every iterate.
/// Returning `Break` from the visitor stops the run early.
pub fn drive(
    problem: &Problem,
    x0: &[f64],
    cfg: &OptimizerConfig,
    steps: usize,
    trial: u64,
    mut visit: impl FnMut(Visit<'_>) -> ControlFlow<()>,
) -> Result<()> {
    cfg.validate()?;
    if x0.len() != problem.dim() {
        return Err(SamError::Dimension {
            expected: problem.dim(),
            got: x0.len(),
        });
    }
    let f = problem.mean();
    let mut rng = SamRng::for_trial(cfg.seed, trial);
    let mut x = x0.to_vec();
    let first = Visit {
        t: 0,
        x: &x,
        f: f.value(&x),
        grad_norm: norm(&f.gradient(&x)),
        record: None,
    };
    if visit(first).is_break() {
        return Ok(());
    }
    for t in 1..=steps {
        let (next, rec) = step(problem, &x, cfg, &mut rng)?;
        let n = norm(&next);
        if n > DIVERGENCE_NORM {
            return Err(SamError::Diverged { step: t, norm: n });
        }
        x = next;
        let v = Visit {
            t,
            x: &x,
            f: f.value(&x),
            grad_norm: norm(&f.gradient(&x)),
            record: Some(&rec),
        };
        if visit(v).is_break() {
            break;
        }
    }
    Ok(())
}

/// Runs trial `trial` (PRNG stream `trial` of `cfg.seed`).
pub fn run_trial(
    problem: &Problem,
    x0: &[f64],
    cfg: &OptimizerConfig,
    steps: usize,
    trial: u64,
    keep_records: bool,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(SamError::invalid("steps", "must be >= 1"));
    }
    let mut traj = Trajectory {
        iterates: Vec::with_capacity(steps + 1),
        f_values: Vec::with_capacity(steps + 1),
        grad_norms: Vec::with_capacity(steps + 1),
        step_records: keep_records.then(|| Vec::with_capacity(steps)),
        config: Some(cfg.clone()),
        function_id: None,
    };
    drive(problem, x0, cfg, steps, trial, |v| {
        traj.iterates.push(v.x.to_vec());
        traj.f_values.push(v.f);
        traj.grad_norms.push(v.grad_norm);
        if let (Some(list), Some(r)) = (traj.step_records.as_mut(), v.record) {
            list.push(r.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(traj)
}

pub fn run_trajectory(
    problem: &Problem,
    x0: &[f64],
    cfg: &OptimizerConfig,
    steps: usize,
) -> Result<Trajectory> {
    run_trial(problem, x0, cfg, steps, 0, false)
}

/// Like [`run_trajectory`] but keeps every [`StepRecord`].
pub fn run_trajectory_detailed(
    problem: &Problem,
    x0: &[f64],
    cfg: &OptimizerConfig,
    steps: usize,
) -> Result<Trajectory> {
    run_trial(problem, x0, cfg, steps, 0, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_quadratic_lb, quadratic};
    use crate::optimizers::Variant;
    use approx::assert_abs_diff_eq;

    #[test]
    fn oscillation_example() {
        let f: Problem = make_quadratic_lb(2, 1.0, 0.5, 1.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 1.0);
        let tr = run_trajectory_detailed(&f, &[1.0 / 3.0], &cfg, 4).unwrap();
        for (t, x) in tr.iterates.iter().enumerate() {
            let want = if t % 2 == 0 { 1.0 / 3.0 } else { -1.0 / 3.0 };
            assert_abs_diff_eq!(x[0], want, epsilon = 1e-15);
        }
        assert_eq!(tr.step_records.as_ref().unwrap().len(), 4);
        tr.validate().unwrap();
    }

    #[test]
    fn gd_geometric() {
        let f: Problem = quadratic(1.0, 0.0, 0.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::Gd, 0.0, 0.5);
        let tr = run_trajectory(&f, &[1.0], &cfg, 3).unwrap();
        let xs: Vec<f64> = tr.iterates.iter().map(|x| x[0]).collect();
        assert_eq!(xs, vec![1.0, 0.5, 0.25, 0.125]);
        assert!(tr.step_records.is_none());
    }

    #[test]
    fn large_step_never_shrinks() {
        let f: Problem = make_quadratic_lb(3, 1.0, 0.5, 1.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 2.0);
        let tr = run_trajectory(&f, &[1.0], &cfg, 50).unwrap();
        for w in tr.iterates.windows(2) {
            assert!(w[1][0].abs() >= w[0][0].abs());
            assert!(w[1][0].signum() != w[0][0].signum());
        }
    }

    #[test]
    fn divergence_guard_names_step() {
        let f: Problem = make_quadratic_lb(3, 1.0, 0.5, 1.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 3.0);
        match run_trajectory(&f, &[1.0], &cfg, 1000) {
            Err(SamError::Diverged { step, norm }) => {
                assert!(step > 10 && step < 1000);
                assert!(norm > DIVERGENCE_NORM);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn zero_steps_rejected() {
        let f: Problem = quadratic(1.0, 0.0, 0.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::Gd, 0.0, 0.5);
        assert!(run_trajectory(&f, &[1.0], &cfg, 0).is_err());
    }

    #[test]
    fn wrong_dimension_rejected() {
        let f: Problem = quadratic(1.0, 0.0, 0.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::Gd, 0.0, 0.5);
        assert!(matches!(
            run_trajectory(&f, &[1.0, 2.0], &cfg, 3),
            Err(SamError::Dimension { .. })
        ));
    }
}
