//! The step rules side by side on one stochastic objective, with a trajectory
//! written to CSV and read back.

use samlab::catalog::{make_sc_counterexample, CounterexampleParams, Problem};
use samlab::harness::{load_trajectory, persist_trajectory, run_trajectory};
use samlab::optimizers::{OptimizerConfig, Variant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cp = CounterexampleParams::strongly_convex(1.0, 5.0, 10.0)?;
    let problem: Problem = make_sc_counterexample(&cp)?.into();
    let dir = std::env::temp_dir().join("samlab-variants");
    std::fs::create_dir_all(&dir)?;
    for variant in [
        Variant::Gd,
        Variant::Usam,
        Variant::DetSam,
        Variant::NSam,
        Variant::MSam,
    ] {
        let rho = if variant == Variant::Gd { 0.0 } else { cp.rho };
        let cfg = OptimizerConfig::new(variant, rho, 0.05).with_seed(3);
        let tr = run_trajectory(&problem, &[cp.c], &cfg, 2_000)?;
        let path = dir.join(format!("{}.csv", variant.as_str()));
        persist_trajectory(&tr, &path)?;
        let back = load_trajectory(&path)?;
        assert_eq!(back.iterates, tr.iterates);
        println!(
            "{:>7}: final x {:+.5}  f {:.5e}  -> {}",
            variant.as_str(),
            tr.final_iterate()[0],
            tr.f_values.last().copied().unwrap_or(f64::NAN),
            path.display()
        );
    }
    Ok(())
}
