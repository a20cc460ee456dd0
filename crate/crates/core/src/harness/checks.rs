use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    make_nonsmooth_max, CounterexampleParams, NonsmoothMax, NonsmoothRegion, Problem,
    StochasticObjective,
};
use crate::error::{Result, SamError};
use crate::optimizers::{OptimizerConfig, Variant};
use crate::schedules::{bound_rhs, TheoremId};
use crate::vecops::distance;
use crate::virtual_loss::{find_stationary_sets, VirtualGradientMap};

use super::experiment::{trial_metrics, ExperimentConfig};
use super::metrics::{mean_se, Metric};
use super::report::{Margin, Relation, Report};
use super::run::{drive, run_trial};

/// Number of standard errors allowed above a bound for stochastic runs.
pub const SE_BAND: f64 = 3.0;
/// Fraction of the run treated as its tail.
pub const TAIL_FRACTION: f64 = 0.1;

fn class_requirements(theorem: TheoremId) -> (&'static [Variant], bool, bool) {
    // (variants, needs strong convexity, needs convexity)
    match theorem {
        TheoremId::Thm31 => (&[Variant::DetSam], true, true),
        TheoremId::Thm33 => (&[Variant::DetSam], false, true),
        TheoremId::Thm34 => (&[Variant::DetSam], false, false),
        TheoremId::Thm41 => (&[Variant::NSam, Variant::MSam], true, true),
        TheoremId::Thm44 => (&[Variant::NSam, Variant::MSam], false, true),
        TheoremId::Thm46 => (&[Variant::NSam], false, false),
        TheoremId::Thm47 => (&[Variant::MSam], false, false),
    }
}

/// Verifies that the function and optimizer fall under the theorem.
pub fn validate_theorem_class(
    theorem: TheoremId,
    problem: &Problem,
    variant: Variant,
) -> Result<()> {
    let meta = problem.meta();
    let (variants, strong, convex) = class_requirements(theorem);
    if !variants.contains(&variant) {
        return Err(SamError::Precondition(format!(
            "{theorem} covers {:?}, not {variant}",
            variants.iter().map(|v| v.as_str()).collect::<Vec<_>>()
        )));
    }
    if !meta.smooth || !(meta.beta > 0.0) {
        return Err(SamError::Precondition(format!(
            "{theorem} needs a smooth function with beta > 0"
        )));
    }
    if convex && !meta.convex {
        return Err(SamError::Precondition(format!(
            "{theorem} needs a convex function"
        )));
    }
    if strong && !(meta.mu > 0.0) {
        return Err(SamError::Precondition(format!(
            "{theorem} needs a strongly convex function"
        )));
    }
    if theorem == TheoremId::Thm47 && meta.lipschitz.is_none() {
        return Err(SamError::Precondition(format!(
            "{theorem} needs a Lipschitz function"
        )));
    }
    if let Some(s) = problem.as_stochastic() {
        if s.achieved_variance() > s.sigma() * s.sigma() * (1.0 + 1e-12) {
            return Err(SamError::Precondition("variance exceeds sigma^2".into()));
        }
    }
    Ok(())
}

/// Runs the experiment at every horizon and checks the trial-averaged
/// metric against the theorem's bound (plus `3 SE` when stochastic).
pub fn check_bound_domination(theorem: TheoremId, exp: &ExperimentConfig) -> Result<Report> {
    let problem = exp.function.build()?;
    check_bound_domination_on(theorem, &problem, exp)
}

/// Like [`check_bound_domination`] on a function outside the catalog;
/// `exp.function` is only used to label the report and for a default `x0`.
pub fn check_bound_domination_on(
    theorem: TheoremId,
    problem: &Problem,
    exp: &ExperimentConfig,
) -> Result<Report> {
    exp.validate()?;
    let problem = problem.clone();
    validate_theorem_class(theorem, &problem, exp.optimizer.variant)?;
    let metric = Metric::for_theorem(theorem);
    if exp.metric != metric {
        log::info!(
            "{theorem} bounds {metric}; ignoring configured metric {}",
            exp.metric
        );
    }
    let ctx = exp.metric_context(&problem);
    let trials = exp.effective_trials(&problem);
    let mut report = Report::new(format!(
        "{theorem} bound domination: {} with {}, metric {metric}",
        exp.function.id, exp.optimizer.variant
    ));
    let cap = theorem.eta_cap(problem.meta().beta);
    for &t in &exp.sweep {
        let run = exp.resolve(&problem, t)?;
        let eta = run.optimizer.eta;
        if eta > cap * (1.0 + 1e-12) {
            return Err(SamError::Precondition(format!(
                "eta = {eta} exceeds the {theorem} cap {cap}"
            )));
        }
        let inputs = exp.schedule_inputs(&problem, &run.x0, t)?;
        let bound = bound_rhs(theorem, &inputs, eta)?;
        let vals = trial_metrics(&problem, &run, metric, &ctx, trials)?;
        let (mean, se) = mean_se(&vals);
        let band = if trials > 1 { SE_BAND * se } else { 0.0 };
        report.push(Margin::new(
            format!("T={t}"),
            mean,
            Relation::AtMost,
            bound + band,
        ));
        report.stat(format!("T={t} eta"), eta);
        report.stat(format!("T={t} bound"), bound);
        report.stat(format!("T={t} se"), se);
    }
    report.stat("trials", trials as f64);
    Ok(report)
}

#[derive(Default)]
struct TrapTrial {
    min_x: f64,
    max_x: f64,
    min_subopt: f64,
    min_dist: f64,
    escape: Option<(usize, f64)>,
}

/// Runs m-SAM from `x0` inside `[c - rho, c + rho]` and checks that no
/// iterate of any trial leaves it.
pub fn check_trapped_interval(
    objective: &StochasticObjective,
    params: &CounterexampleParams,
    cfg: &OptimizerConfig,
    x0: f64,
    steps: usize,
    trials: usize,
) -> Result<Report> {
    params.validate()?;
    cfg.validate()?;
    if cfg.variant != Variant::MSam {
        return Err(SamError::WrongVariant {
            expected: "m-sam",
            got: cfg.variant.to_string(),
        });
    }
    if trials == 0 {
        return Err(SamError::invalid("trials", "must be >= 1"));
    }
    let cap = params.eta_cap();
    if !(cfg.eta <= cap) {
        return Err(SamError::Precondition(format!(
            "eta = {} exceeds the trapping cap {cap}",
            cfg.eta
        )));
    }
    if (cfg.rho - params.rho).abs() > 1e-12 * params.rho {
        return Err(SamError::Precondition(format!(
            "optimizer rho {} differs from construction rho {}",
            cfg.rho, params.rho
        )));
    }
    let (lo, hi) = params.trap();
    if !(lo <= x0 && x0 <= hi) {
        return Err(SamError::Precondition(format!(
            "x0 = {x0} outside [{lo}, {hi}]"
        )));
    }
    let meta = objective.mean().meta();
    let x_star = meta.x_star.as_ref().map_or(0.0, |v| v[0]);
    let f_star = meta.f_star;
    let problem = Problem::Stochastic(objective.clone());

    let per_trial: Vec<TrapTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut s = TrapTrial {
                min_x: f64::INFINITY,
                max_x: f64::NEG_INFINITY,
                min_subopt: f64::INFINITY,
                min_dist: f64::INFINITY,
                escape: None,
            };
            drive(&problem, &[x0], cfg, steps, k, |v| {
                let x = v.x[0];
                s.min_x = s.min_x.min(x);
                s.max_x = s.max_x.max(x);
                s.min_subopt = s.min_subopt.min(v.f - f_star);
                s.min_dist = s.min_dist.min((x - x_star).abs());
                if x < lo || x > hi {
                    s.escape = Some((v.t, x));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            })?;
            Ok(s)
        })
        .collect::<Result<_>>()?;

    let mut report = Report::new(format!(
        "trapped interval [{lo}, {hi}] for m-SAM, eta = {}, {trials} trials x {steps} steps",
        cfg.eta
    ));
    let agg = |f: fn(&TrapTrial) -> f64, take_min: bool| {
        per_trial.iter().map(f).fold(
            if take_min {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            |a, b| {
                if take_min {
                    a.min(b)
                } else {
                    a.max(b)
                }
            },
        )
    };
    report.push(Margin::new(
        "min iterate",
        agg(|s| s.min_x, true),
        Relation::AtLeast,
        lo,
    ));
    report.push(Margin::new(
        "max iterate",
        agg(|s| s.max_x, false),
        Relation::AtMost,
        hi,
    ));
    let dist_floor = ((lo - x_star).abs()).min((hi - x_star).abs());
    report.push(Margin::new(
        "min distance to x*",
        agg(|s| s.min_dist, true),
        Relation::AtLeast,
        dist_floor,
    ));
    report.push(Margin::new(
        "min suboptimality",
        agg(|s| s.min_subopt, true),
        Relation::AtLeast,
        params.suboptimality_floor(),
    ));
    if let Some((k, (t, x))) = per_trial
        .iter()
        .enumerate()
        .find_map(|(k, s)| s.escape.map(|e| (k, e)))
    {
        report.fail(format!("trial {k} escaped at t = {t}: x = {x}"));
    }
    report.stat("a", params.a);
    report.stat("c", params.c);
    report.stat("x_star", x_star);
    Ok(report)
}

/// Optional assertions for [`check_floor`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FloorTarget {
    pub final_x: Option<Vec<f64>>,
    pub final_grad_norm: Option<f64>,
    /// Tolerance for the two `final_*` targets.
    pub tol: f64,
    pub min_tail_grad_norm: Option<f64>,
    pub min_tail_distance: Option<f64>,
}

struct FloorTrial {
    final_x: Vec<f64>,
    final_grad: f64,
    tail_min_grad: f64,
    tail: Vec<Vec<f64>>,
}

/// Tail statistics of SAM runs: how far the last 10% of iterates stay from
/// stationarity.
pub fn check_floor(
    problem: &Problem,
    cfg: &OptimizerConfig,
    x0: &[f64],
    steps: usize,
    trials: usize,
    target: Option<&FloorTarget>,
) -> Result<Report> {
    if !matches!(cfg.variant, Variant::DetSam | Variant::NSam | Variant::MSam) {
        return Err(SamError::WrongVariant {
            expected: "det-sam, n-sam or m-sam",
            got: cfg.variant.to_string(),
        });
    }
    if trials == 0 {
        return Err(SamError::invalid("trials", "must be >= 1"));
    }
    let trials = if cfg.variant.is_stochastic() && problem.as_stochastic().is_some() {
        trials
    } else {
        1
    };
    let tail_len = ((steps as f64 * TAIL_FRACTION).ceil() as usize).max(1);
    let runs: Vec<FloorTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let tr = run_trial(problem, x0, cfg, steps, k, false)?;
            let start = tr.iterates.len() - tail_len;
            Ok(FloorTrial {
                final_x: tr.final_iterate().to_vec(),
                final_grad: *tr.grad_norms.last().unwrap(),
                tail_min_grad: tr.grad_norms[start..]
                    .iter()
                    .fold(f64::INFINITY, |m, &g| m.min(g)),
                tail: tr.iterates[start..].to_vec(),
            })
        })
        .collect::<Result<_>>()?;

    let min_dist = if problem.dim() == 1 {
        let (lo, hi) = runs
            .iter()
            .flat_map(|r| r.tail.iter().map(|x| x[0]))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
                (a.min(x), b.max(x))
            });
        let pad = 2.0 * cfg.rho;
        let map = VirtualGradientMap::new(problem.mean().clone(), cfg.rho)?
            .with_zero_grad_eps(cfg.zero_grad_eps)?;
        let sets = find_stationary_sets(&map, lo - pad, hi + pad, cfg.rho / 1e4)?;
        runs.iter()
            .flat_map(|r| r.tail.iter())
            .map(|x| {
                sets.nearest_true(x[0])
                    .map_or(f64::INFINITY, |s| (x[0] - s).abs())
            })
            .fold(f64::INFINITY, f64::min)
    } else {
        match &problem.meta().x_star {
            Some(xs) => runs
                .iter()
                .flat_map(|r| r.tail.iter())
                .map(|x| distance(x, xs))
                .fold(f64::INFINITY, f64::min),
            None => f64::NAN,
        }
    };

    let mut report = Report::new(format!(
        "tail floor for {} on {}, eta = {}, rho = {}, {trials} trials x {steps} steps",
        cfg.variant,
        problem.mean().name(),
        cfg.eta,
        cfg.rho
    ));
    let tail_min_grad = runs
        .iter()
        .map(|r| r.tail_min_grad)
        .fold(f64::INFINITY, f64::min);
    report.stat("tail_min_grad_norm", tail_min_grad);
    report.stat("tail_min_distance_to_stationary", min_dist);
    report.stat("tail_length", tail_len as f64);
    let first = &runs[0];
    for (i, v) in first.final_x.iter().enumerate() {
        report.stat(format!("final_x{i}"), *v);
    }
    report.stat("final_grad_norm", first.final_grad);
    let (mg, _) = mean_se(&runs.iter().map(|r| r.final_grad).collect::<Vec<_>>());
    report.stat("mean_final_grad_norm", mg);

    if let Some(tg) = target {
        if let Some(want) = &tg.final_x {
            let worst = runs
                .iter()
                .map(|r| distance(&r.final_x, want))
                .fold(0.0, f64::max);
            report.push(Margin::new(
                "final iterate error",
                worst,
                Relation::AtMost,
                tg.tol,
            ));
        }
        if let Some(want) = tg.final_grad_norm {
            let worst = runs
                .iter()
                .map(|r| (r.final_grad - want).abs())
                .fold(0.0, f64::max);
            report.push(Margin::new(
                "final grad norm error",
                worst,
                Relation::AtMost,
                tg.tol,
            ));
        }
        if let Some(want) = tg.min_tail_grad_norm {
            report.push(Margin::new(
                "tail min grad norm",
                tail_min_grad,
                Relation::AtLeast,
                want,
            ));
        }
        if let Some(want) = tg.min_tail_distance {
            report.push(Margin::new(
                "tail min distance",
                min_dist,
                Relation::AtLeast,
                want,
            ));
        }
    }
    Ok(report)
}

/// Runs deterministic SAM on the nonsmooth max function and checks that
/// the iterates stay in the half-plane `b1 < -7 rho/2 + eta`, away from the
/// minimizer.
pub fn check_nonsmooth_escape(cfg: &OptimizerConfig, x0: [f64; 2], steps: usize) -> Result<Report> {
    cfg.validate()?;
    if cfg.variant != Variant::DetSam {
        return Err(SamError::WrongVariant {
            expected: "det-sam",
            got: cfg.variant.to_string(),
        });
    }
    let rho = cfg.rho;
    if !(cfg.eta < 1.75 * rho) {
        return Err(SamError::Precondition(format!(
            "need eta < 7 rho / 4 = {}, got {}",
            1.75 * rho,
            cfg.eta
        )));
    }
    let region = NonsmoothMax::region(&x0, rho);
    if !matches!(
        region,
        NonsmoothRegion::B | NonsmoothRegion::C | NonsmoothRegion::D
    ) {
        return Err(SamError::Precondition(format!(
            "x0 = {x0:?} lies in region {region:?}, need B, C or D"
        )));
    }
    let problem: Problem = make_nonsmooth_max().into();
    let mut max_b1 = f64::NEG_INFINITY;
    let mut min_dist = f64::INFINITY;
    let mut first_bad: Option<(usize, f64)> = None;
    let limit = -3.5 * rho + cfg.eta;
    let mut last = x0.to_vec();
    drive(&problem, &x0, cfg, steps, 0, |v| {
        let (b1, _) = NonsmoothMax::basis_coords(v.x);
        max_b1 = max_b1.max(b1);
        min_dist = min_dist.min(crate::vecops::norm(v.x));
        if b1 >= limit && first_bad.is_none() {
            first_bad = Some((v.t, b1));
        }
        last.copy_from_slice(v.x);
        ControlFlow::Continue(())
    })?;
    let mut report = Report::new(format!(
        "nonsmooth escape: det-SAM from {x0:?}, rho = {rho}, eta = {}, {steps} steps",
        cfg.eta
    ));
    report.push(Margin::new("max b1", max_b1, Relation::Below, limit));
    report.push(Margin::new(
        "min distance to origin",
        min_dist,
        Relation::AtLeast,
        7.0 * rho / (4.0 * 5f64.sqrt()),
    ));
    if let Some((t, b1)) = first_bad {
        report.fail(format!("b1 = {b1} at t = {t}"));
    }
    report.stat("final_x0", last[0]);
    report.stat("final_x1", last[1]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        make_cvx_counterexample, make_sc_counterexample, make_sine_example, FunctionParams,
    };
    use crate::harness::experiment::{FunctionSpec, Schedule, StartPoint};

    #[test]
    fn thm34_on_sine_dominated() {
        let exp = ExperimentConfig {
            function: FunctionSpec::new("sine", FunctionParams::default()),
            optimizer: OptimizerConfig::new(Variant::DetSam, 1.0, 0.0),
            schedule: Schedule::Theorem {
                theorem: TheoremId::Thm34,
            },
            x0: StartPoint::Point(vec![0.4]),
            metric: Metric::MeanSqGradNorm,
            sweep: vec![10, 100, 1000],
            trials: 1,
            seed: 0,
        };
        let r = check_bound_domination(TheoremId::Thm34, &exp).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.margins.len(), 3);
    }

    #[test]
    fn zero_step_trivially_dominated() {
        let exp = ExperimentConfig {
            function: FunctionSpec::new("quad-lb-2", FunctionParams::default()),
            optimizer: OptimizerConfig::new(Variant::DetSam, 0.1, 0.0),
            schedule: Schedule::Constant,
            x0: StartPoint::Point(vec![1.0]),
            metric: Metric::MinSuboptimality,
            sweep: vec![10, 100],
            trials: 1,
            seed: 0,
        };
        let r = check_bound_domination(TheoremId::Thm31, &exp).unwrap();
        assert!(r.pass);
        for m in &r.margins {
            assert_eq!(m.observed, 0.25);
        }
    }

    #[test]
    fn class_mismatch_rejected() {
        let exp = ExperimentConfig {
            function: FunctionSpec::new("sine", FunctionParams::default()),
            optimizer: OptimizerConfig::new(Variant::DetSam, 1.0, 0.0),
            schedule: Schedule::Theorem {
                theorem: TheoremId::Thm31,
            },
            x0: StartPoint::Point(vec![0.4]),
            metric: Metric::MinSuboptimality,
            sweep: vec![10],
            trials: 1,
            seed: 0,
        };
        assert!(matches!(
            check_bound_domination(TheoremId::Thm31, &exp),
            Err(SamError::Precondition(_))
        ));
    }

    #[test]
    fn sc_trap_short_run() {
        let cp = CounterexampleParams::strongly_convex(1.0, 5.0, 10.0).unwrap();
        let f = make_sc_counterexample(&cp).unwrap();
        let cfg = OptimizerConfig::new(Variant::MSam, 1.0, 0.06).with_seed(3);
        let r = check_trapped_interval(&f, &cp, &cfg, cp.c, 2000, 4).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn trap_zero_steps_checks_start_only() {
        let cp = CounterexampleParams::convex(1.0, 1.0, 1.0, 0.75, 2.0).unwrap();
        let f = make_cvx_counterexample(&cp).unwrap();
        let cfg = OptimizerConfig::new(Variant::MSam, 1.0, 1.0);
        let r = check_trapped_interval(&f, &cp, &cfg, 2.0, 0, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.margins[0].observed, 2.0);
    }

    #[test]
    fn trap_preconditions() {
        let cp = CounterexampleParams::strongly_convex(1.0, 5.0, 10.0).unwrap();
        let f = make_sc_counterexample(&cp).unwrap();
        let ok = OptimizerConfig::new(Variant::MSam, 1.0, 0.06);
        assert!(check_trapped_interval(&f, &cp, &ok, 4.0, 10, 1).is_err());
        let big = OptimizerConfig::new(Variant::MSam, 1.0, 0.1);
        assert!(check_trapped_interval(&f, &cp, &big, cp.c, 10, 1).is_err());
        let n = OptimizerConfig::new(Variant::NSam, 1.0, 0.06);
        assert!(check_trapped_interval(&f, &cp, &n, cp.c, 10, 1).is_err());
    }

    #[test]
    fn sine_floor_from_stationary_start() {
        let f: Problem = make_sine_example(1.0, 1.0).unwrap().into();
        let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 0.5);
        let r = check_floor(&f, &cfg, &[0.3], 100, 1, None).unwrap();
        assert!(r.stats["tail_min_distance_to_stationary"] < 1e-12);
        assert!((r.stats["final_x0"] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn nonsmooth_preconditions() {
        let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 0.5);
        assert!(check_nonsmooth_escape(&cfg, [-1.0, 0.0], 10).is_err());
        let big = OptimizerConfig::new(Variant::DetSam, 1.0, 2.0);
        assert!(check_nonsmooth_escape(&big, [-5.0, 0.0], 10).is_err());
        let r = check_nonsmooth_escape(&cfg, [-5.0, 0.0], 200).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }
}
