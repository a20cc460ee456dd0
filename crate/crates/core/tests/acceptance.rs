//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use samlab::catalog::{
    make_cvx_counterexample, make_quadratic_lb, make_sc_counterexample, make_sine_example,
    CounterexampleParams, FunctionParams, Problem, Quadratic1D, StochasticObjective,
};
use samlab::harness::{
    check_bound_domination, check_bound_domination_on, check_floor, check_nonsmooth_escape,
    check_trapped_interval, geometric_sweep, reproduce_figure, sweep_and_fit, ExperimentConfig,
    FigureId, FloorTarget, FunctionSpec, Metric, Report, Schedule, StartPoint, StartRule,
};
use samlab::optimizers::{det_sam_step, stochastic_sam_step, OptimizerConfig, SamRng, Variant};
use samlab::schedules::{bound_rhs, ScheduleInputs, TheoremId};
use samlab::virtual_loss::{integrate_virtual_loss, VirtualGradientMap};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report_ok(r: &Report) -> Result<(), String> {
    if r.pass {
        Ok(())
    } else {
        Err(format!("{}: {}", r.experiment, r.failures.join("; ")))
    }
}

fn worst(r: &Report) -> String {
    r.worst_margin().map_or("-".into(), |m| {
        format!("worst margin {:.3e} ({})", m.margin, m.label)
    })
}

fn lower_bound_rate() -> Outcome {
    let exp = ExperimentConfig {
        function: FunctionSpec::new(
            "quad-lb-2",
            FunctionParams {
                beta: 1.0,
                mu: 0.5,
                rho: 1.0,
                ..Default::default()
            },
        ),
        optimizer: OptimizerConfig::new(Variant::DetSam, 1.0, 0.0),
        schedule: Schedule::InverseHorizon { mu: 0.5 },
        x0: StartPoint::Rule(StartRule::Oscillation),
        metric: Metric::MinSuboptimality,
        sweep: geometric_sweep(4, 10),
        trials: 1,
        seed: 0,
    };
    let fit = sweep_and_fit(&exp).map_err(|e| e.to_string())?;
    ensure(
        (fit.exponent + 2.0).abs() <= 0.1,
        format!("exponent {}", fit.exponent),
    )?;
    // oracle: x0 = eta rho / (4 - eta) is a 2-cycle, so the metric is x0^2 / 4
    for (t, m) in &fit.points {
        let eta = 1.0 / t;
        let x0 = eta / (4.0 - eta);
        ensure(
            (m - x0 * x0 / 4.0).abs() <= 1e-12 * m.max(1e-300) + 1e-18,
            format!("T = {t}: metric {m} vs cycle value {}", x0 * x0 / 4.0),
        )?;
    }
    Ok(format!(
        "exponent {:.4}, r^2 {:.6}",
        fit.exponent, fit.r_squared
    ))
}

fn upper_bound_domination() -> Outcome {
    let (mu, beta, rho) = (0.5, 1.0, 0.1);
    let f = Quadratic1D::new(mu, 0.0, 0.0)
        .and_then(|q| q.with_class(beta, mu))
        .map_err(|e| e.to_string())?;
    let problem: Problem = (std::sync::Arc::new(f) as samlab::catalog::ObjectiveFunction).into();
    let exp = ExperimentConfig {
        function: FunctionSpec::new("half-mu-square", FunctionParams::default()),
        optimizer: OptimizerConfig::new(Variant::DetSam, rho, 0.0),
        schedule: Schedule::Theorem {
            theorem: TheoremId::Thm31,
        },
        x0: StartPoint::Point(vec![1.0]),
        metric: Metric::MinSuboptimality,
        sweep: vec![10, 100, 1000],
        trials: 1,
        seed: 0,
    };
    let r =
        check_bound_domination_on(TheoremId::Thm31, &problem, &exp).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    // oracle: the bound recomputed from its formula
    let delta = mu / 2.0;
    for &t in &exp.sweep {
        let eta = r.stats[&format!("T={t} eta")];
        let want = (1.0 - eta * mu).powi(t as i32) * delta
            + eta * eta * beta.powi(6) * rho * rho / (2.0 * mu.powi(3));
        let got = r.stats[&format!("T={t} bound")];
        ensure(
            (got - want).abs() <= 1e-12 * want,
            format!("T = {t}: bound {got} vs {want}"),
        )?;
    }
    Ok(format!("3/3 horizons dominated, {}", worst(&r)))
}

fn nonconvex_floor() -> Outcome {
    let problem: Problem = make_sine_example(1.0, 1.0)
        .map_err(|e| e.to_string())?
        .into();
    let want_grad = 0.16539867;
    ensure(
        (sine_floor_grad() - want_grad).abs() < 1e-8,
        format!("oracle grad {}", sine_floor_grad()),
    )?;
    let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 0.5);
    let target = FloorTarget {
        final_x: Some(vec![0.7]),
        final_grad_norm: Some(want_grad),
        tol: 1e-6,
        ..Default::default()
    };
    let r =
        check_floor(&problem, &cfg, &[0.4], 10_000, 1, Some(&target)).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    Ok(format!(
        "final x {:.9}, |grad| {:.9}",
        r.stats["final_x0"], r.stats["final_grad_norm"]
    ))
}

fn sc_trap() -> Outcome {
    let (beta, rho, sigma) = (5.0, 1.0, 10.0);
    let cp = CounterexampleParams::strongly_convex(rho, beta, sigma).map_err(|e| e.to_string())?;
    let a = sc_counter_a(beta, rho, sigma);
    ensure(a == 1.0 && cp.a == a, format!("a = {}", cp.a))?;
    let f = make_sc_counterexample(&cp).map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig::new(Variant::MSam, rho, 0.06).with_seed(20240);
    let r =
        check_trapped_interval(&f, &cp, &cfg, 7.0 / 6.0, 100_000, 20).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    let m = |l: &str| r.margins.iter().find(|m| m.label == l).unwrap();
    ensure(
        (m("min iterate").threshold - 1.0 / 6.0).abs() < 1e-15,
        "trap low end",
    )?;
    ensure(
        (m("max iterate").threshold - 13.0 / 6.0).abs() < 1e-15,
        "trap high end",
    )?;
    ensure(
        m("min distance to x*").threshold >= 1.0 / 6.0 - 1e-15,
        "distance floor",
    )?;
    ensure(
        (m("min suboptimality").threshold - a * rho * rho / 72.0).abs() < 1e-15,
        "suboptimality floor",
    )?;
    Ok(format!(
        "20 x 1e5 steps in [{:.6}, {:.6}], min subopt {:.6e}",
        m("min iterate").observed,
        m("max iterate").observed,
        m("min suboptimality").observed
    ))
}

fn cvx_trap(c: f64) -> Result<(Report, f64), String> {
    let (beta, rho, sigma, p) = (1.0, 1.0, 1.0, 0.75);
    let cp = CounterexampleParams::convex(rho, beta, sigma, p, c).map_err(|e| e.to_string())?;
    let a = cvx_counter_a(beta, rho, sigma, p);
    ensure((cp.a - a).abs() < 1e-15, format!("a = {} vs {a}", cp.a))?;
    let floor = a * (c - rho) + a * a / (2.0 * beta);
    ensure(
        (cp.suboptimality_floor() - floor).abs() < 1e-14,
        format!("floor {} vs {floor}", cp.suboptimality_floor()),
    )?;
    let f = make_cvx_counterexample(&cp).map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig::new(Variant::MSam, rho, 1.0 / beta).with_seed(7);
    let r = check_trapped_interval(&f, &cp, &cfg, c, 100_000, 20).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    Ok((r, floor))
}

fn cvx_unbounded() -> Outcome {
    let (r2, floor2) = cvx_trap(2.0)?;
    let lo = r2
        .margins
        .iter()
        .find(|m| m.label == "min iterate")
        .unwrap();
    let hi = r2
        .margins
        .iter()
        .find(|m| m.label == "max iterate")
        .unwrap();
    ensure(
        lo.threshold == 1.0 && hi.threshold == 3.0,
        "trap is not [1, 3]",
    )?;
    let (r10, floor10) = cvx_trap(10.0)?;
    let ratio = floor10 / floor2;
    ensure(ratio >= 8.0, format!("floor ratio {ratio}"))?;
    let obs = |r: &Report| {
        r.margins
            .iter()
            .find(|m| m.label == "min suboptimality")
            .unwrap()
            .observed
    };
    Ok(format!(
        "floors {:.4e} -> {:.4e} (ratio {ratio:.3}), observed min subopt {:.4e} -> {:.4e}",
        floor2,
        floor10,
        obs(&r2),
        obs(&r10)
    ))
}

fn nonsmooth() -> Outcome {
    let cfg = OptimizerConfig::new(Variant::DetSam, 1.0, 0.5);
    let r = check_nonsmooth_escape(&cfg, [-5.0, 0.0], 10_000).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    let d = r
        .margins
        .iter()
        .find(|m| m.label == "min distance to origin")
        .unwrap();
    ensure((d.threshold - 0.7826).abs() < 1e-4, "distance threshold")?;
    let b = r.margins.iter().find(|m| m.label == "max b1").unwrap();
    ensure(b.threshold == -3.0, "b1 threshold")?;
    Ok(format!(
        "max b1 {:.4}, min distance {:.4}",
        b.observed, d.observed
    ))
}

fn figure1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = reproduce_figure(FigureId::Fig1, dir.path()).map_err(|e| e.to_string())?;
    let x0 = &out.config.x0;
    ensure(
        (x0[0] * x0[1] - 1.0).abs() > 1e-3,
        "start lies on the hyperbola",
    )?;
    ensure(out.config.steps == 10_000, "steps")?;
    let dist = |l: &str| {
        let x = out
            .trajectories
            .iter()
            .find(|(k, _)| k == l)
            .unwrap()
            .1
            .final_iterate()
            .to_vec();
        (
            ((x[0] - 1.0).powi(2) + (x[1] - 1.0).powi(2)).sqrt(),
            (x[0] * x[1] - 1.0).abs(),
        )
    };
    let (ds, rs) = dist("sam");
    let (dg, rg) = dist("gd");
    let (du, ru) = dist("usam");
    ensure(
        ds < dg && ds < du,
        format!("distances sam {ds}, gd {dg}, usam {du}"),
    )?;
    ensure(
        rs < 1e-3 && rg < 1e-3 && ru < 1e-3,
        format!("residuals sam {rs:e}, gd {rg:e}, usam {ru:e}"),
    )?;
    Ok(format!(
        "dist to (1,1): sam {ds:.4} < gd {dg:.4}, usam {du:.4}; max |xy-1| {:.2e}",
        rs.max(rg).max(ru)
    ))
}

fn descent_lemmas() -> Outcome {
    // deterministic: 10^4 random steps, zero violations
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0usize;
    let mut worst_slack = f64::INFINITY;
    for k in 0..10_000 {
        let f = match k % 4 {
            0..=2 => {
                let beta = rng.random_range(1.0..5.0);
                let mu = rng.random_range(0.05..beta / 2.0);
                let rho = rng.random_range(0.1..2.0);
                make_quadratic_lb((k % 4) as u8 + 1, beta, mu, rho).unwrap()
            }
            _ => {
                let cp = CounterexampleParams::strongly_convex(1.0, 5.0, 10.0).unwrap();
                make_sc_counterexample(&cp).unwrap().mean().clone()
            }
        };
        let m = f.meta();
        let rho = rng.random_range(0.05..2.0);
        let eta = rng.random_range(0.0..1.0) * 0.5 / m.beta;
        let x = [rng.random_range(-5.0..5.0)];
        let g = f.gradient(&x)[0].abs();
        let cfg = OptimizerConfig::new(Variant::DetSam, rho, eta);
        let (x1, _) = det_sam_step(f.as_ref(), &x, &cfg).unwrap();
        let lhs = f.value(&x1);
        let rhs = det_descent_rhs(f.value(&x), g, eta, m.beta, m.mu, rho);
        let slack = rhs - lhs;
        ensure(
            slack >= -1e-12 * (1.0 + lhs.abs()),
            format!(
                "violation {slack:e} at x = {}, eta = {eta}, rho = {rho}",
                x[0]
            ),
        )?;
        worst_slack = worst_slack.min(slack);
        checked += 1;
    }

    // stochastic: trial means within 3 SE
    let cp = CounterexampleParams::strongly_convex(1.0, 5.0, 10.0).unwrap();
    let sc = make_sc_counterexample(&cp).unwrap();
    let noisy = StochasticObjective::with_linear_noise(
        Quadratic1D::new(1.0, 0.0, 0.0)
            .map(|q| std::sync::Arc::new(q) as samlab::catalog::ObjectiveFunction)
            .unwrap(),
        0.5,
    )
    .unwrap();
    let mut cases = 0;
    for obj in [&sc, &noisy] {
        let m = obj.mean().meta().clone();
        for c in obj.components() {
            ensure(c.meta().beta <= m.beta + 1e-12, "component smoothness")?;
        }
        for &x in &[-3.0, -1.0, 0.5, 7.0 / 6.0, 2.0, 4.0] {
            for variant in [Variant::NSam, Variant::MSam] {
                for eta in [0.5 / m.beta, 0.2 / m.beta] {
                    let cfg = OptimizerConfig::new(variant, 1.0, eta).with_seed(31);
                    let vals: Vec<f64> = (0..10_000u64)
                        .map(|k| {
                            let mut r = SamRng::for_trial(cfg.seed, k);
                            let (x1, _) = stochastic_sam_step(obj, &[x], &cfg, &mut r).unwrap();
                            obj.mean().value(&x1)
                        })
                        .collect();
                    let (mean, se) = mean_and_se(&vals);
                    let g = obj.mean().gradient(&[x])[0].abs();
                    let rhs = sto_descent_rhs(
                        obj.mean().value(&[x]),
                        g,
                        eta,
                        m.beta,
                        m.mu,
                        1.0,
                        obj.sigma(),
                    );
                    ensure(
                        mean <= rhs + 3.0 * se,
                        format!("{variant} at x = {x}, eta = {eta}: {mean} > {rhs} + 3 x {se}"),
                    )?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} deterministic steps (min slack {worst_slack:.3e}), {cases} stochastic cases x 1e4 trials"
    ))
}

fn oracle_equivalences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut n_points = 0;
    for (id, problem, (lo, hi)) in catalog_entries() {
        let f = problem.mean().clone();
        let d = f.dim();
        let rho = 0.7;
        let eta = 0.1;
        let map = VirtualGradientMap::new(f.clone(), rho).unwrap();
        let cfg = OptimizerConfig::new(Variant::DetSam, rho, eta);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(lo..hi)).collect();
            let (x1, _) = det_sam_step(f.as_ref(), &x, &cfg).unwrap();
            let g = map.eval(&x).unwrap();
            let oracle = oracle_sam_step(|p| f.gradient(p), &x, rho, eta);
            for i in 0..d {
                let via_g = x[i] - eta * g[i];
                ensure(
                    (x1[i] - via_g).abs() <= 1e-12 && (x1[i] - oracle[i]).abs() <= 1e-12,
                    format!("{id} at {x:?}: {} vs {via_g} / {}", x1[i], oracle[i]),
                )?;
            }
            n_points += 1;
            if f.meta().smooth {
                let fd = finite_difference(&f, &x);
                let an = f.gradient(&x);
                for i in 0..d {
                    let scale = an[i].abs().max(1.0);
                    ensure(
                        (fd[i] - an[i]).abs() <= 1e-6 * scale,
                        format!("{id} gradient at {x:?}: analytic {} vs fd {}", an[i], fd[i]),
                    )?;
                }
            }
        }
        if let Some(s) = problem.as_stochastic() {
            for c in s.components() {
                if !c.meta().smooth {
                    continue;
                }
                for _ in 0..200 {
                    let x: Vec<f64> = (0..d).map(|_| rng.random_range(lo..hi)).collect();
                    let fd = finite_difference(c, &x);
                    let an = c.gradient(&x);
                    ensure(
                        (fd[0] - an[0]).abs() <= 1e-6 * an[0].abs().max(1.0),
                        format!("{id} component gradient at {x:?}: {} vs {}", an[0], fd[0]),
                    )?;
                }
            }
        }
    }

    let (beta, rho) = (1.0, 1.0);
    let map = VirtualGradientMap::new(make_sine_example(beta, rho).unwrap(), rho).unwrap();
    let j = integrate_virtual_loss(&map, -1.5, 1.5, 1e-4).unwrap();
    let shift = sine_virtual_loss(j.xs[0], beta, rho) - j.values[0];
    let mut max_err: f64 = 0.0;
    for (x, v) in j.xs.iter().zip(&j.values) {
        max_err = max_err.max((v + shift - sine_virtual_loss(*x, beta, rho)).abs());
    }
    ensure(max_err <= 1e-4, format!("virtual loss error {max_err:e}"))?;
    Ok(format!(
        "{n_points} SAM steps match x - eta G_f, virtual loss error {max_err:.2e}"
    ))
}

fn stochastic_bounds() -> Outcome {
    let sc = FunctionSpec::new(
        "sc-counter",
        FunctionParams {
            beta: 5.0,
            rho: 1.0,
            sigma: 10.0,
            ..Default::default()
        },
    );
    let sine = FunctionSpec::new("sine", FunctionParams::default());
    let noisy_sine = sine.clone().with_linear_noise(0.1);
    let cases: Vec<(TheoremId, FunctionSpec, Variant, Vec<f64>)> = vec![
        (TheoremId::Thm41, sc.clone(), Variant::NSam, vec![3.0]),
        (TheoremId::Thm41, sc.clone(), Variant::MSam, vec![3.0]),
        (TheoremId::Thm44, sc.clone(), Variant::NSam, vec![3.0]),
        (TheoremId::Thm44, sc.clone(), Variant::MSam, vec![3.0]),
        (TheoremId::Thm46, sc.clone(), Variant::NSam, vec![3.0]),
        (
            TheoremId::Thm46,
            noisy_sine.clone(),
            Variant::NSam,
            vec![0.4],
        ),
        (TheoremId::Thm47, sine.clone(), Variant::MSam, vec![0.4]),
        (
            TheoremId::Thm47,
            noisy_sine.clone(),
            Variant::MSam,
            vec![0.4],
        ),
    ];
    let mut lines = Vec::new();
    for (thm, spec, variant, x0) in cases {
        let exp = ExperimentConfig {
            function: spec.clone(),
            optimizer: OptimizerConfig::new(variant, spec.params.rho, 0.0),
            schedule: Schedule::Theorem { theorem: thm },
            x0: StartPoint::Point(x0),
            metric: Metric::for_theorem(thm),
            sweep: vec![100, 1000, 10_000],
            trials: 100,
            seed: 4,
        };
        let r = check_bound_domination(thm, &exp).map_err(|e| format!("{thm} {}: {e}", spec.id))?;
        report_ok(&r)?;
        // oracle: the reported bound matches an independent evaluation
        let problem = spec.build().unwrap();
        for &t in &exp.sweep {
            let eta = r.stats[&format!("T={t} eta")];
            let inp = exp.schedule_inputs(&problem, &[exp_x0(&exp)], t).unwrap();
            let b = bound_rhs(thm, &inp, eta).unwrap();
            ensure(b == r.stats[&format!("T={t} bound")], "bound bookkeeping")?;
            ensure(
                b == independent_bound(thm, &inp, eta),
                format!("{thm} bound formula at T = {t}"),
            )?;
        }
        lines.push(format!("{thm}/{}/{variant}", spec.id));
    }
    Ok(format!("{} configurations dominated", lines.len()))
}

fn exp_x0(exp: &ExperimentConfig) -> f64 {
    match &exp.x0 {
        StartPoint::Point(v) => v[0],
        _ => unreachable!(),
    }
}

fn independent_bound(thm: TheoremId, i: &ScheduleInputs, eta: f64) -> f64 {
    let (b, m, r, d, t, s2) = (i.beta, i.mu, i.rho, i.delta, i.t as f64, i.sigma * i.sigma);
    let l2 = i.lipschitz.unwrap_or(0.0).powi(2);
    match thm {
        TheoremId::Thm41 => {
            (1.0 - eta * m).powf(t) * d
                + 2.0 * b * b * r * r / m
                + eta * b * (s2 - b * b * r * r) / m
        }
        TheoremId::Thm44 => {
            2.0 * d / (eta * t) + 4.0 * b * b * r * r + 2.0 * eta * b * (s2 - b * b * r * r)
        }
        TheoremId::Thm46 => 2.0 * d / (eta * t) + b * b * r * r + 2.0 * b * s2 * eta,
        TheoremId::Thm47 => 2.0 * d / (eta * t) + 5.0 * b * b * r * r + 2.0 * b * eta * (s2 + l2),
        _ => f64::NAN,
    }
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "lower-bound rate",
            budget: Duration::from_secs(5),
            run: lower_bound_rate,
        },
        Criterion {
            id: 2,
            name: "upper-bound domination",
            budget: Duration::from_secs(5),
            run: upper_bound_domination,
        },
        Criterion {
            id: 3,
            name: "nonconvex floor",
            budget: Duration::from_secs(1),
            run: nonconvex_floor,
        },
        Criterion {
            id: 4,
            name: "m-SAM trap, strongly convex",
            budget: Duration::from_secs(30),
            run: sc_trap,
        },
        Criterion {
            id: 5,
            name: "m-SAM unbounded gap, convex",
            budget: Duration::from_secs(60),
            run: cvx_unbounded,
        },
        Criterion {
            id: 6,
            name: "nonsmooth non-convergence",
            budget: Duration::from_secs(1),
            run: nonsmooth,
        },
        Criterion {
            id: 7,
            name: "hyperbola comparison",
            budget: Duration::from_secs(60),
            run: figure1,
        },
        Criterion {
            id: 8,
            name: "descent inequalities",
            budget: Duration::from_secs(120),
            run: descent_lemmas,
        },
        Criterion {
            id: 9,
            name: "oracle equivalences",
            budget: Duration::from_secs(120),
            run: oracle_equivalences,
        },
        Criterion {
            id: 10,
            name: "stochastic bound domination",
            budget: Duration::from_secs(120),
            run: stochastic_bounds,
        },
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|k| k == c.id)) {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let res = res.and_then(|msg| {
            if took <= c.budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; runtime {took:.2?} over {:?}", c.budget))
            }
        });
        match res {
            Ok(msg) => println!(
                "criterion {:>2} PASS  {:<30} [{took:.2?}] {msg}",
                c.id, c.name
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {:<30} [{took:.2?}] {msg}",
                    c.id, c.name
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
