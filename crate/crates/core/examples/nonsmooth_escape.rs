//! On the nonsmooth max of two linear pieces, det-SAM started away from the
//! minimizer keeps a fixed distance from it.

use samlab::catalog::NonsmoothMax;
use samlab::harness::check_nonsmooth_escape;
use samlab::optimizers::{OptimizerConfig, Variant};

fn main() -> samlab::Result<()> {
    let rho = 1.0;
    let cfg = OptimizerConfig::new(Variant::DetSam, rho, 0.5);
    for x0 in [
        [-5.0, 0.0],
        [-4.0, 3.0],
        NonsmoothMax::from_basis(-5.0, -3.0),
    ] {
        println!("x0 = {x0:.4?}, region {:?}", NonsmoothMax::region(&x0, rho));
        let r = check_nonsmooth_escape(&cfg, x0, 10_000)?;
        print!("{r}");
        println!(
            "final ({:.4}, {:.4})\n",
            r.stats["final_x0"], r.stats["final_x1"]
        );
    }
    Ok(())
}
