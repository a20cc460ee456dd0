//! Tabulates `f`, `grad f`, `G_f` and `J_f` on a grid and writes the CSV that
//! the `virtual` subcommand produces.

use samlab::catalog::make_sine_example;
use samlab::virtual_loss::{write_grid_csv, VirtualGradientMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_sine_example(1.0, 1.0)?;
    let map = VirtualGradientMap::new(f, 1.0)?;
    let path = std::env::temp_dir().join("samlab-sine-virtual.csv");
    write_grid_csv(&map, -1.5, 1.5, 1e-3, true, &path)?;
    let text = std::fs::read_to_string(&path)?;
    for line in text.lines().step_by(250) {
        println!("{line}");
    }
    println!("wrote {}", path.display());
    Ok(())
}
