//! Sample a surface to CSV, load it back and query the bilinear interpolant.

use stieltjes2d::io::grid::{load_grid, write_grid, GridFile};
use stieltjes2d::Surface;

fn main() -> stieltjes2d::Result<()> {
    let f = Surface::new("f", |t: f64, s: f64| t * s + (2.0 * t).sin());
    let xs: Vec<f64> = (0..=4).map(|i| i as f64 / 4.0).collect();
    let ys: Vec<f64> = (0..=3).map(|i| i as f64 / 3.0).collect();
    let grid = GridFile::sample(&f, xs, ys)?;

    let path = std::env::temp_dir().join("stieltjes2d-grid-example.csv");
    write_grid(&path, &grid)?;
    print!("{}", grid.to_csv());

    let g = load_grid(&path)?;
    println!("{}", g.name());
    println!("node (0.25, 1/3): {} vs {}", g.eval(0.25, 1.0 / 3.0), grid.values[1][1]);
    println!("between nodes (0.3, 0.5): {:.6} vs f = {:.6}", g.eval(0.3, 0.5), f.eval(0.3, 0.5));
    println!("outside: {:?}", g.try_eval(1.5, 0.5).err().map(|e| e.to_string()));
    std::fs::remove_file(&path)?;
    Ok(())
}
