//! m-SAM on the two-component counterexamples never leaves a fixed interval
//! around `c`, so its suboptimality stays above a positive floor.

use samlab::catalog::{make_cvx_counterexample, make_sc_counterexample, CounterexampleParams};
use samlab::harness::check_trapped_interval;
use samlab::optimizers::{OptimizerConfig, Variant};

fn main() -> samlab::Result<()> {
    let cases = [
        (
            "strongly convex",
            CounterexampleParams::strongly_convex(1.0, 5.0, 10.0)?,
        ),
        (
            "convex",
            CounterexampleParams::convex(1.0, 1.0, 1.0, 0.75, 2.0)?,
        ),
    ];
    for (name, cp) in cases {
        let f = match name {
            "convex" => make_cvx_counterexample(&cp)?,
            _ => make_sc_counterexample(&cp)?,
        };
        let (lo, hi) = cp.trap();
        let cfg = OptimizerConfig::new(Variant::MSam, cp.rho, cp.eta_cap()).with_seed(1);
        println!(
            "{name}: trap [{lo:.4}, {hi:.4}], eta {:.4}, floor {:.4e}",
            cp.eta_cap(),
            cp.suboptimality_floor()
        );
        let r = check_trapped_interval(&f, &cp, &cfg, cp.c, 20_000, 20)?;
        print!("{r}");
        println!("{}\n", if r.pass { "trapped" } else { "escaped" });
    }
    Ok(())
}
