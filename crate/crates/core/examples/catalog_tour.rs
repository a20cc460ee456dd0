//! Every catalog entry with its class constants and default start.

use samlab::catalog::{self, FunctionParams};

fn main() -> samlab::Result<()> {
    let params = FunctionParams::default();
    for id in catalog::CATALOG_IDS {
        let problem = catalog::build(id, &params)?;
        let m = problem.meta();
        let x0 = catalog::default_x0(id, &params)?;
        let f = problem.mean();
        println!("{id:<16} {}", catalog::describe(id).unwrap_or(""));
        println!(
            "    dim {}  beta {}  mu {}  smooth {}  convex {}  sigma {}",
            f.dim(),
            m.beta,
            m.mu,
            m.smooth,
            m.convex,
            problem.sigma()
        );
        println!(
            "    x0 {x0:?}  f(x0) {:.6}  grad {:?}",
            f.value(&x0),
            f.gradient(&x0)
        );
    }
    Ok(())
}
