//! Regenerates every figure's trajectory CSVs and config into one directory.

use samlab::harness::{reproduce_figure, FigureId};

fn main() -> samlab::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("samlab-figures"), Into::into);
    for fig in FigureId::ALL {
        let out = reproduce_figure(fig, &dir)?;
        println!(
            "{fig}: {}, {} steps",
            out.config.function_id, out.config.steps
        );
        for (k, v) in &out.summary {
            println!("    {k:<32} {v:.6}");
        }
    }
    println!("files in {}", dir.display());
    Ok(())
}
