//! SAM, USAM and GD on `(xy - 1)^2` from a shared start.
//!
//! All three reach the hyperbola; SAM keeps drifting along it towards the
//! flattest minimizer `(1, 1)`.

use samlab::harness::{reproduce_figure, FigureId};

fn main() -> samlab::Result<()> {
    let dir = std::env::temp_dir().join("samlab-fig1");
    let out = reproduce_figure(FigureId::Fig1, &dir)?;
    println!("x0 = {:?}, {} steps", out.config.x0, out.config.steps);
    for (label, tr) in &out.trajectories {
        let x = tr.final_iterate();
        println!(
            "{label:>5}: final = ({:.6}, {:.6})  |xy - 1| = {:.2e}  dist to (1,1) = {:.6}",
            x[0],
            x[1],
            out.summary[&format!("{label}_final_residual")],
            out.summary[&format!("{label}_final_dist_to_x_star")],
        );
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
