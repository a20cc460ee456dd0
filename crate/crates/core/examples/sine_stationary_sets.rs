//! Deterministic SAM on the sine example stalls at a point where the
//! gradient is not zero.
//!
//! The virtual gradient `G_f(x) = grad f(x + rho sign(f'(x)))` vanishes at
//! such points, so they are stationary for the virtual loss `J_f` that SAM
//! actually descends.

use samlab::catalog::{make_sine_example, Problem};
use samlab::harness::run_trajectory;
use samlab::optimizers::{OptimizerConfig, Variant};
use samlab::virtual_loss::{find_stationary_sets, integrate_virtual_loss, VirtualGradientMap};

fn main() -> samlab::Result<()> {
    let (beta, rho) = (1.0, 1.0);
    let f = make_sine_example(beta, rho)?;
    let map = VirtualGradientMap::new(f.clone(), rho)?;

    let sets = find_stationary_sets(&map, -1.5, 1.5, 1e-4)?;
    println!(
        "true stationary (grad f = 0):   {:.4?}",
        sets.true_stationary
    );
    println!(
        "spurious stationary (G_f = 0):  {:.4?}",
        sets.spurious_stationary
    );

    let j = integrate_virtual_loss(&map, -1.5, 1.5, 1e-3)?;
    println!("J_f at the spurious points:");
    for &s in &sets.spurious_stationary {
        println!(
            "    x = {s:+.4}  J_f = {:+.6}  f'(x) = {:+.6}",
            j.value_at(s),
            f.gradient(&[s])[0]
        );
    }

    let problem: Problem = f.into();
    let cfg = OptimizerConfig::new(Variant::DetSam, rho, 0.5);
    let tr = run_trajectory(&problem, &[0.4], &cfg, 10_000)?;
    let x = tr.final_iterate()[0];
    println!(
        "det-SAM from 0.4: x = {x:.9}, |f'(x)| = {:.9}, nearest spurious {:?}",
        problem.mean().gradient(&[x])[0].abs(),
        sets.nearest_spurious(x)
    );
    Ok(())
}
