//! Command-line front end behind the `samlab` binary.
//!
//! Exit codes: 0 success, 1 usage or precondition error, 2 divergence,
//! 3 failed check.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::catalog::{self, FunctionParams, Problem, CATALOG_IDS};
use crate::error::{Result, SamError};
use crate::harness::{
    check_bound_domination, check_floor, check_nonsmooth_escape, check_trapped_interval,
    fit_power_law, geometric_sweep, persist_trajectory, reproduce_figure, run_sweep,
    run_trajectory, ExperimentConfig, FigureId, FloorTarget, FunctionSpec, Margin, Metric,
    Relation, Report, Schedule, StartPoint, StartRule,
};
use crate::optimizers::{OptimizerConfig, Variant, DEFAULT_ZERO_GRAD_EPS};
use crate::schedules::TheoremId;
use crate::virtual_loss::{write_grid_csv, VirtualGradientMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Check ids accepted by `samlab check`.
pub const CHECK_IDS: [&str; 12] = [
    "thm31", "thm32", "thm33", "thm34", "thm35", "thm36", "thm41", "thm42", "thm44", "thm45",
    "thm46", "thm47",
];

#[derive(Parser, Debug)]
#[command(
    name = "samlab",
    version,
    about = "Constant-perturbation SAM experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog functions with their class constants.
    ListFunctions,
    /// Run one trajectory and optionally write it as CSV.
    Run(RunArgs),
    /// Sweep horizons from an experiment config and fit a power law.
    Sweep(SweepArgs),
    /// Dump the virtual gradient (and virtual loss) on a grid.
    Virtual(VirtualArgs),
    /// Run a theorem check and write a JSON report.
    Check(CheckArgs),
    /// Write the data behind a figure.
    Reproduce(ReproduceArgs),
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Counts accept scientific notation (`1e5`).
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok(n);
    }
    let v = parse_f64(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(v as usize)
}

/// Comma-separated coordinates, e.g. `-5,0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.split(',')
        .map(parse_f64)
        .collect::<std::result::Result<_, _>>()
        .map(Point)
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// Catalog id.
    #[arg(long = "fn", value_name = "ID")]
    pub function: Option<String>,
    #[arg(long, value_parser = parse_f64)]
    pub beta: Option<f64>,
    #[arg(long, value_parser = parse_f64)]
    pub mu: Option<f64>,
    /// Perturbation radius, shared by the function construction and SAM.
    #[arg(long, value_parser = parse_f64)]
    pub rho: Option<f64>,
    #[arg(long, value_parser = parse_f64)]
    pub sigma: Option<f64>,
    /// Component probability (cvx-counter).
    #[arg(long, value_parser = parse_f64)]
    pub p: Option<f64>,
    /// Basin center (cvx-counter).
    #[arg(long, value_parser = parse_f64)]
    pub c: Option<f64>,
    /// Wraps a deterministic entry as `f(x) +- s sum_j x_j`.
    #[arg(long, value_parser = parse_f64, value_name = "S")]
    pub linear_noise: Option<f64>,
}

impl FunctionArgs {
    fn params(&self) -> FunctionParams {
        let d = FunctionParams::default();
        FunctionParams {
            beta: self.beta.unwrap_or(d.beta),
            mu: self.mu.unwrap_or(d.mu),
            rho: self.rho.unwrap_or(d.rho),
            sigma: self.sigma.unwrap_or(d.sigma),
            p: self.p,
            c: self.c,
        }
    }

    fn spec(&self, default_id: Option<&str>) -> Result<FunctionSpec> {
        let id = self
            .function
            .clone()
            .or_else(|| default_id.map(str::to_string))
            .ok_or_else(|| SamError::invalid("fn", "required"))?;
        let mut spec = FunctionSpec::new(id, self.params());
        spec.linear_noise = self.linear_noise;
        Ok(spec)
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long = "opt", default_value = "det-sam", value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long, value_parser = parse_f64)]
    pub eta: f64,
    /// Comma-separated starting point; the catalog default when omitted.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x0: Option<Point>,
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    pub steps: usize,
    #[arg(long, env = "SAMLAB_SEED", default_value = "0")]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ZERO_GRAD_EPS, value_parser = parse_f64)]
    pub zero_grad_eps: f64,
    /// Trajectory CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: SamError| e.to_string())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long, env = "SAMLAB_SEED")]
    pub seed: Option<u64>,
    /// Writes sweep points and the fit as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct VirtualArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_parser = parse_f64)]
    pub xmin: Option<f64>,
    #[arg(long, value_parser = parse_f64)]
    pub xmax: Option<f64>,
    /// Grid spacing; `(xmax - xmin) / 2000` when omitted.
    #[arg(long, value_parser = parse_f64, value_name = "H")]
    pub grid: Option<f64>,
    /// Omit the integrated virtual loss column (required in 2-D).
    #[arg(long)]
    pub no_integrate: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct CheckArgs {
    /// Theorem id, e.g. thm34.
    pub id: String,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Experiment config for the bound-domination checks.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "opt", value_parser = parse_variant)]
    pub variant: Option<Variant>,
    /// Constant step size; the theorem schedule when omitted.
    #[arg(long, value_parser = parse_f64)]
    pub eta: Option<f64>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x0: Option<Point>,
    /// Longest horizon.
    #[arg(long, value_parser = parse_count)]
    pub steps: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    pub trials: Option<usize>,
    /// Seed; 0 unless set here or via SAMLAB_SEED. Overrides a config's seed.
    #[arg(long, env = "SAMLAB_SEED")]
    pub seed: Option<u64>,
    /// Report path; `<id>_report.json` when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// fig1, fig4a, fig4b or fig4c.
    pub figure: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn help_footer() -> String {
    format!(
        "Catalog ids: {}\nTheorem ids: {}\nFigure ids: fig1, fig4a, fig4b, fig4c\n\
         Exit codes: 0 ok, 1 usage, 2 divergence, 3 check failed\n\
         SAMLAB_SEED sets the default seed.",
        CATALOG_IDS.join(", "),
        CHECK_IDS.join(", ")
    )
}

pub fn command() -> clap::Command {
    let footer = help_footer();
    let mut cmd = Cli::command().after_help(footer.clone());
    let names: Vec<String> = cmd
        .get_subcommands()
        .map(|s| s.get_name().to_string())
        .collect();
    for n in names {
        let f = footer.clone();
        cmd = cmd.mut_subcommand(n, |s| s.after_help(f));
    }
    cmd
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let sub = matches.subcommand_name().unwrap_or_default().to_string();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                SamError::Diverged { .. } => EXIT_DIVERGED,
                SamError::InvalidParameter { .. } | SamError::UnknownId { .. } => {
                    let mut c = command();
                    c.build();
                    if let Some(s) = c.find_subcommand_mut(&sub) {
                        eprintln!("\n{}", s.render_usage());
                    }
                    EXIT_USAGE
                }
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::ListFunctions => list_functions(),
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Virtual(a) => cmd_virtual(a),
        Command::Check(a) => cmd_check(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

fn print_resolved<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn list_functions() -> Result<i32> {
    let p = FunctionParams::default();
    let mut out = std::io::stdout().lock();
    for id in CATALOG_IDS {
        let problem = catalog::build(id, &p)?;
        let m = problem.meta();
        let _ = writeln!(
            out,
            "{id:<14} d={} beta={} mu={} L={} smooth={} convex={} sigma={}  {}",
            problem.dim(),
            m.beta,
            m.mu,
            m.lipschitz.map_or("-".into(), |l| format!("{l:.6}")),
            m.smooth,
            m.convex,
            problem.sigma(),
            catalog::describe(id).unwrap_or("")
        );
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ResolvedRunConfig<'a> {
    function: &'a FunctionSpec,
    optimizer: &'a OptimizerConfig,
    x0: &'a [f64],
    steps: usize,
    out: Option<&'a Path>,
}

fn cmd_run(a: RunArgs) -> Result<i32> {
    let spec = a.function.spec(None)?;
    let problem = spec.build()?;
    let x0 = match a.x0 {
        Some(Point(v)) => v,
        None => catalog::default_x0(&spec.id, &spec.params)?,
    };
    let optimizer = OptimizerConfig {
        variant: a.variant,
        rho: spec.params.rho,
        eta: a.eta,
        zero_grad_eps: a.zero_grad_eps,
        seed: a.seed,
    };
    optimizer.validate()?;
    if a.steps == 0 {
        return Err(SamError::invalid("steps", "must be >= 1"));
    }
    print_resolved(&ResolvedRunConfig {
        function: &spec,
        optimizer: &optimizer,
        x0: &x0,
        steps: a.steps,
        out: a.out.as_deref(),
    })?;
    let traj = run_trajectory(&problem, &x0, &optimizer, a.steps)?.with_function_id(&spec.id);
    if let Some(p) = &a.out {
        persist_trajectory(&traj, p)?;
    }
    println!(
        "final x = {:?}  f = {:.10e}  |grad f| = {:.10e}",
        traj.final_iterate(),
        traj.f_values.last().unwrap(),
        traj.grad_norms.last().unwrap()
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepOutput {
    points: Vec<crate::harness::SweepPoint>,
    fit: Option<crate::harness::RateFit>,
}

fn cmd_sweep(a: SweepArgs) -> Result<i32> {
    let mut exp = ExperimentConfig::from_json_file(&a.config)?;
    if let Some(s) = a.seed {
        exp.seed = s;
    }
    print_resolved(&exp)?;
    let points = run_sweep(&exp)?;
    for p in &points {
        println!(
            "T = {:>8}  eta = {:.6e}  {} = {:.6e} +- {:.2e}",
            p.t, p.eta, exp.metric, p.mean, p.se
        );
    }
    let fit = fit_power_law(
        &points
            .iter()
            .map(|p| (p.t as f64, p.mean))
            .collect::<Vec<_>>(),
    )
    .ok();
    if let Some(f) = &fit {
        println!(
            "fitted exponent {:.4} (r^2 = {:.4})",
            f.exponent, f.r_squared
        );
    }
    if let Some(out) = &a.out {
        let text = serde_json::to_string_pretty(&SweepOutput { points, fit })?;
        std::fs::write(out, text + "\n").map_err(|e| SamError::io(out, e))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ResolvedVirtualConfig<'a> {
    function: &'a FunctionSpec,
    rho: f64,
    xmin: f64,
    xmax: f64,
    grid: f64,
    integrate: bool,
    out: &'a Path,
}

fn cmd_virtual(a: VirtualArgs) -> Result<i32> {
    let spec = a.function.spec(None)?;
    let problem = spec.build()?;
    let (lo, hi) = catalog::sampling_box(&spec.id, &spec.params);
    let xmin = a.xmin.unwrap_or(lo);
    let xmax = a.xmax.unwrap_or(hi);
    let grid = a.grid.unwrap_or((xmax - xmin) / 2000.0);
    let integrate = !a.no_integrate;
    print_resolved(&ResolvedVirtualConfig {
        function: &spec,
        rho: spec.params.rho,
        xmin,
        xmax,
        grid,
        integrate,
        out: &a.out,
    })?;
    let map = VirtualGradientMap::new(problem.mean().clone(), spec.params.rho)?;
    let rows = write_grid_csv(&map, xmin, xmax, grid, integrate, &a.out)?;
    println!("wrote {rows} rows to {}", a.out.display());
    Ok(EXIT_OK)
}

fn default_function(id: &str) -> &'static str {
    match id {
        "thm31" => "quad-lb-1",
        "thm32" | "thm33" => "quad-lb-2",
        "thm34" | "thm35" | "thm47" => "sine",
        "thm36" => "nonsmooth-max",
        "thm41" | "thm42" | "thm44" | "thm46" => "sc-counter",
        _ => "cvx-counter",
    }
}

fn default_variant(theorem: TheoremId) -> Variant {
    match theorem {
        TheoremId::Thm31 | TheoremId::Thm33 | TheoremId::Thm34 => Variant::DetSam,
        TheoremId::Thm41 | TheoremId::Thm44 | TheoremId::Thm46 => Variant::NSam,
        TheoremId::Thm47 => Variant::MSam,
    }
}

/// Decades `10, 100, ...` below `t`, followed by `t`.
fn decade_sweep(t: usize) -> Vec<usize> {
    let mut v: Vec<usize> = std::iter::successors(Some(10usize), |k| k.checked_mul(10))
        .take_while(|&k| k < t)
        .collect();
    v.push(t);
    v
}

fn one_dim(x0: &[f64], what: &str) -> Result<f64> {
    match x0 {
        [v] => Ok(*v),
        _ => Err(SamError::invalid(
            "x0",
            format!("{what} needs a scalar start"),
        )),
    }
}

fn rho_of(f: &FunctionArgs) -> f64 {
    f.rho.unwrap_or(FunctionParams::default().rho)
}

fn cmd_check(a: CheckArgs) -> Result<i32> {
    let id = a.id.to_ascii_lowercase();
    if !CHECK_IDS.contains(&id.as_str()) {
        return Err(SamError::UnknownId {
            kind: "theorem",
            id: a.id.clone(),
        });
    }
    let out = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{id}_report.json")));
    let report = match id.as_str() {
        "thm32" => check_lower_bound_rate(&a)?,
        "thm35" => {
            let spec = a.function.spec(Some(default_function(&id)))?;
            let problem = spec.build()?;
            let x0 = match &a.x0 {
                Some(Point(v)) => v.clone(),
                None => catalog::default_x0(&spec.id, &spec.params)?,
            };
            let cfg = OptimizerConfig::new(
                a.variant.unwrap_or(Variant::DetSam),
                spec.params.rho,
                a.eta.unwrap_or(0.5),
            )
            .with_seed(a.seed.unwrap_or(0));
            let steps = a.steps.unwrap_or(10_000);
            let trials = a.trials.unwrap_or(1);
            let target = FloorTarget {
                min_tail_distance: Some(0.1 * spec.params.rho),
                ..Default::default()
            };
            print_resolved(&serde_json::json!({
                "check": id, "function": spec, "optimizer": cfg, "x0": x0,
                "steps": steps, "trials": trials, "target": target, "out": out,
            }))?;
            check_floor(&problem, &cfg, &x0, steps, trials, Some(&target))?
        }
        "thm36" => {
            let rho = rho_of(&a.function);
            let x0 = a.x0.clone().map_or(vec![-5.0 * rho, 0.0], |p| p.0);
            let x0: [f64; 2] = x0
                .try_into()
                .map_err(|_| SamError::invalid("x0", "nonsmooth-max needs a 2-D start"))?;
            let cfg = OptimizerConfig::new(Variant::DetSam, rho, a.eta.unwrap_or(0.5))
                .with_seed(a.seed.unwrap_or(0));
            let steps = a.steps.unwrap_or(10_000);
            print_resolved(&serde_json::json!({
                "check": id, "function": "nonsmooth-max", "optimizer": cfg, "x0": x0,
                "steps": steps, "out": out,
            }))?;
            check_nonsmooth_escape(&cfg, x0, steps)?
        }
        "thm42" | "thm45" => {
            let spec = a.function.spec(Some(default_function(&id)))?;
            let problem = spec.build()?;
            let Problem::Stochastic(obj) = &problem else {
                return Err(SamError::invalid(
                    "fn",
                    "trapped-interval checks need sc-counter or cvx-counter",
                ));
            };
            let params = obj
                .params()
                .ok_or_else(|| {
                    SamError::invalid(
                        "fn",
                        "trapped-interval checks need sc-counter or cvx-counter",
                    )
                })?
                .clone();
            let x0 = match &a.x0 {
                Some(Point(v)) => one_dim(v, "trapped-interval check")?,
                None => params.c,
            };
            let cfg =
                OptimizerConfig::new(Variant::MSam, params.rho, a.eta.unwrap_or(params.eta_cap()))
                    .with_seed(a.seed.unwrap_or(0));
            let steps = a.steps.unwrap_or(10_000);
            let trials = a.trials.unwrap_or(20);
            print_resolved(&serde_json::json!({
                "check": id, "function": spec, "construction": params, "optimizer": cfg,
                "x0": x0, "steps": steps, "trials": trials, "out": out,
            }))?;
            check_trapped_interval(obj, &params, &cfg, x0, steps, trials)?
        }
        _ => {
            let theorem: TheoremId = id.parse()?;
            let exp = match &a.config {
                Some(p) => {
                    let mut e = ExperimentConfig::from_json_file(p)?;
                    if let Some(s) = a.seed {
                        e.seed = s;
                    }
                    e
                }
                None => bound_experiment(theorem, &a)?,
            };
            print_resolved(&serde_json::json!({ "check": id, "experiment": exp, "out": out }))?;
            check_bound_domination(theorem, &exp)?
        }
    };
    report.write_json(&out)?;
    print!("{report}");
    println!("{}: {}", id, if report.pass { "PASS" } else { "FAIL" });
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn bound_experiment(theorem: TheoremId, a: &CheckArgs) -> Result<ExperimentConfig> {
    let spec = a.function.spec(Some(default_function(theorem.as_str())))?;
    let rho = spec.params.rho;
    let variant = a.variant.unwrap_or(default_variant(theorem));
    let schedule = match a.eta {
        Some(_) => Schedule::Constant,
        None => Schedule::Theorem { theorem },
    };
    let x0 = match &a.x0 {
        Some(Point(v)) => StartPoint::Point(v.clone()),
        None => StartPoint::Rule(StartRule::Default),
    };
    let trials = a
        .trials
        .unwrap_or(if theorem.is_stochastic() { 100 } else { 1 });
    Ok(ExperimentConfig {
        function: spec,
        optimizer: OptimizerConfig::new(variant, rho, a.eta.unwrap_or(0.0)),
        schedule,
        x0,
        metric: Metric::for_theorem(theorem),
        sweep: decade_sweep(a.steps.unwrap_or(1000)),
        trials,
        seed: a.seed.unwrap_or(0),
    })
}

/// Target exponent and tolerance of the lower-bound rate check.
const LOWER_BOUND_EXPONENT: f64 = -2.0;
const LOWER_BOUND_TOL: f64 = 0.1;

fn check_lower_bound_rate(a: &CheckArgs) -> Result<Report> {
    let spec = a.function.spec(Some("quad-lb-2"))?;
    if spec.id != "quad-lb-2" {
        return Err(SamError::invalid(
            "fn",
            "the lower-bound rate check runs on quad-lb-2",
        ));
    }
    let mu = spec.params.mu;
    let exp = ExperimentConfig {
        optimizer: OptimizerConfig::new(Variant::DetSam, spec.params.rho, 0.0),
        function: spec,
        schedule: Schedule::InverseHorizon { mu },
        x0: StartPoint::Rule(StartRule::Oscillation),
        metric: Metric::MinSuboptimality,
        sweep: match a.steps {
            Some(t) => geometric_sweep(4, (t as f64).log2().floor().max(6.0) as u32),
            None => geometric_sweep(4, 10),
        },
        trials: 1,
        seed: a.seed.unwrap_or(0),
    };
    print_resolved(&serde_json::json!({ "check": "thm32", "experiment": exp }))?;
    let points = run_sweep(&exp)?;
    let fit = fit_power_law(
        &points
            .iter()
            .map(|p| (p.t as f64, p.mean))
            .collect::<Vec<_>>(),
    )?;
    let mut r = Report::new("lower-bound rate: det-SAM on beta x^2/4 with eta = 1/(2 mu T)");
    r.push(Margin::new(
        "|exponent + 2|",
        (fit.exponent - LOWER_BOUND_EXPONENT).abs(),
        Relation::AtMost,
        LOWER_BOUND_TOL,
    ));
    r.stat("exponent", fit.exponent);
    r.stat("intercept", fit.intercept);
    r.stat("r_squared", fit.r_squared);
    for p in &points {
        r.stat(format!("T={} min-suboptimality", p.t), p.mean);
    }
    Ok(r)
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<i32> {
    let fig: FigureId = a.figure.parse()?;
    print_resolved(&serde_json::json!({
        "figure": fig,
        "config": crate::harness::FigureConfig::default_for(fig),
        "out": a.out,
    }))?;
    let out = reproduce_figure(fig, &a.out)?;
    for (k, v) in &out.summary {
        println!("{k} = {v:.10e}");
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific() {
        assert_eq!(parse_count("1e5").unwrap(), 100_000);
        assert_eq!(parse_count("250").unwrap(), 250);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("-5,0").unwrap(), Point(vec![-5.0, 0.0]));
        assert!(parse_point("1,x").is_err());
    }

    #[test]
    fn decades() {
        assert_eq!(decade_sweep(10_000), vec![10, 100, 1000, 10_000]);
        assert_eq!(decade_sweep(5), vec![5]);
        assert_eq!(decade_sweep(300), vec![10, 100, 300]);
    }

    #[test]
    fn help_lists_ids() {
        let h = command().render_long_help().to_string();
        for id in CATALOG_IDS.iter().chain(CHECK_IDS.iter()) {
            assert!(h.contains(id), "{id}");
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            main_with_args(["samlab", "run", "--eta", "0.1"]),
            EXIT_USAGE
        );
        assert_eq!(main_with_args(["samlab", "bogus"]), EXIT_USAGE);
        assert_eq!(main_with_args(["samlab", "check", "thm99"]), EXIT_USAGE);
        assert_eq!(main_with_args(["samlab", "--help"]), EXIT_OK);
    }
}
