//! Erosion, dilation, opening and closing on a small picture.

use morphoprot::grid::{BinaryGrid, StructuringElement};
use morphoprot::morphology::{close, dilate, erode, open};

fn show(title: &str, g: &BinaryGrid) {
    println!("{title} ({} px)\n{}", g.count_ones(), g.to_ascii());
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shape = BinaryGrid::from_ascii(&[
        "................",
        ".######.........",
        ".######....#....",
        ".###.##...###...",
        ".######..#####..",
        ".######...###...",
        "...........#....",
        "..#.............",
        "................",
    ])?;
    let se = StructuringElement::cross();

    show("input", &shape);
    show("erode", &erode(&shape, &se));
    show("dilate", &dilate(&shape, &se));
    show("open", &open(&shape, &se));
    show("close", &close(&shape, &se));
    Ok(())
}
