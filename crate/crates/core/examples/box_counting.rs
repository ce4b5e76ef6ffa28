//! Box-counting dimension of a few reference shapes.

use morphoprot::fractal::{box_counts, box_dimension, default_sizes};
use morphoprot::grid::BinaryGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 512;
    let shapes = [
        ("filled square", BinaryGrid::from_fn(n, n, |_, _| true)),
        ("diagonal line", BinaryGrid::from_fn(n, n, |x, y| x == y)),
        ("sierpinski", BinaryGrid::from_fn(n, n, |x, y| x & y == 0)),
    ];
    for (name, grid) in &shapes {
        let series = box_counts(grid, &default_sizes(n))?;
        let fit = box_dimension(&series)?;
        println!("{name:>14}: D = {:.4}  R² = {:.4}", fit.dimension, fit.r_squared);
    }
    println!("log 3 / log 2 = {:.4}\n", 3f64.ln() / 2f64.ln());

    print!("{}", box_counts(&shapes[2].1, &default_sizes(n))?.to_csv());
    Ok(())
}
