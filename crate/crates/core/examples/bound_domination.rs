//! Measured performance against the guaranteed upper bounds, for a
//! deterministic and a stochastic setting.

use samlab::catalog::FunctionParams;
use samlab::harness::{
    check_bound_domination, ExperimentConfig, FunctionSpec, Metric, Schedule, StartPoint,
};
use samlab::optimizers::{OptimizerConfig, Variant};
use samlab::schedules::TheoremId;

fn main() -> samlab::Result<()> {
    let sine = FunctionSpec::new("sine", FunctionParams::default());
    let sc = FunctionSpec::new(
        "sc-counter",
        FunctionParams {
            beta: 5.0,
            sigma: 10.0,
            ..Default::default()
        },
    );
    let cases = [
        (TheoremId::Thm34, sine.clone(), Variant::DetSam, 1),
        (
            TheoremId::Thm47,
            sine.with_linear_noise(0.1),
            Variant::MSam,
            100,
        ),
        (TheoremId::Thm41, sc.clone(), Variant::NSam, 100),
        (TheoremId::Thm44, sc, Variant::MSam, 100),
    ];
    for (thm, spec, variant, trials) in cases {
        let exp = ExperimentConfig {
            optimizer: OptimizerConfig::new(variant, spec.params.rho, 0.0),
            function: spec,
            schedule: Schedule::Theorem { theorem: thm },
            x0: StartPoint::default(),
            metric: Metric::for_theorem(thm),
            sweep: vec![100, 1000, 10_000],
            trials,
            seed: 7,
        };
        println!("{thm} on {} with {}", exp.function.id, variant.as_str());
        let r = check_bound_domination(thm, &exp)?;
        print!("{r}");
        println!("{}\n", if r.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}
