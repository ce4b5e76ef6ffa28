//! Geodesic dilation of a marker inside a mask, counted to convergence.

use morphoprot::grid::{BinaryGrid, StructuringElement};
use morphoprot::morphology::geodesic_dilate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mask = BinaryGrid::from_ascii(&[
        "######################",
        ".....................#",
        "######################",
        "#.....................",
        "######################",
        "..........#...........",
        "..........#######.....",
    ])?;
    let mut marker = BinaryGrid::new(mask.width(), mask.height());
    marker.set(0, 0, true);

    for (name, se) in [("square", StructuringElement::square(1)), ("cross", StructuringElement::cross())] {
        let g = geodesic_dilate(&marker, &mask, &se)?;
        println!("{name}: count = {}, reached {} of {} px", g.count, g.grid.count_ones(), mask.count_ones());
    }
    let g = geodesic_dilate(&marker, &mask, &StructuringElement::cross())?;
    println!("{}", g.grid.to_ascii());
    Ok(())
}
