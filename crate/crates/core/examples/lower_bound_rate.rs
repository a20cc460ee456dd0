//! Fitting the convergence rate of det-SAM on a strongly convex quadratic
//! with step size `1 / (mu T)`.
//!
//! From the oscillation start the best suboptimality decays like `T^-2`,
//! which no choice of constants can improve.

use samlab::catalog::FunctionParams;
use samlab::harness::{
    geometric_sweep, sweep_and_fit, ExperimentConfig, FunctionSpec, Metric, Schedule, StartPoint,
    StartRule,
};
use samlab::optimizers::{OptimizerConfig, Variant};

fn main() -> samlab::Result<()> {
    let params = FunctionParams {
        beta: 1.0,
        mu: 0.5,
        rho: 1.0,
        ..Default::default()
    };
    let exp = ExperimentConfig {
        function: FunctionSpec::new("quad-lb-2", params),
        optimizer: OptimizerConfig::new(Variant::DetSam, 1.0, 0.0),
        schedule: Schedule::InverseHorizon { mu: 0.5 },
        x0: StartPoint::Rule(StartRule::Oscillation),
        metric: Metric::MinSuboptimality,
        sweep: geometric_sweep(4, 12),
        trials: 1,
        seed: 0,
    };
    let fit = sweep_and_fit(&exp)?;
    for (t, m) in &fit.points {
        println!(
            "T = {t:>6}  min f - f* = {m:.6e}  fit {:.6e}",
            fit.predict(*t)
        );
    }
    println!("exponent {:.4}  r^2 {:.6}", fit.exponent, fit.r_squared);
    Ok(())
}
