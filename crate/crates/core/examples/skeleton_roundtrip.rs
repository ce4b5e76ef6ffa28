//! Skeleton decomposition of a shape and its exact reconstruction.

use morphoprot::grid::{BinaryGrid, StructuringElement};
use morphoprot::morphology::{reconstruct, skeletonize};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shape = BinaryGrid::from_fn(48, 24, |x, y| {
        let (dx, dy) = (x as f64 - 14.0, y as f64 - 12.0);
        dx * dx + dy * dy <= 81.0 || (26..44).contains(&x) && (4..20).contains(&y)
    });

    for se in [StructuringElement::square(1), StructuringElement::cross()] {
        let sk = skeletonize(&shape, &se)?;
        let skeleton = sk.skeleton();
        let back = reconstruct(&sk);
        println!(
            "se with {} offsets: N = {:?}, skeleton {} of {} px, lossless = {}",
            se.len(),
            sk.max_n(),
            skeleton.count_ones(),
            shape.count_ones(),
            back == shape
        );
        for layer in sk.layers.iter().filter(|l| !l.grid.is_empty()) {
            println!("  Sk_{:<2} {:4} px", layer.scale, layer.grid.count_ones());
        }
        println!("{}", skeleton.to_ascii());
    }
    Ok(())
}
