//! Slice a structure, connect and skeletonize every slice, and write PGM images.
//!
//! ```text
//! cargo run --release --example stacked_skeleton -- structure.pdb out_dir
//! ```

use morphoprot::ingest::parse_pdb;
use morphoprot::pipelines::{stacked_skeleton_with_images, Method1Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/helix_a.pdb").into());
    let out = std::path::PathBuf::from(args.next().unwrap_or_else(|| "stacked_skeleton_out".into()));
    std::fs::create_dir_all(&out)?;

    let model = parse_pdb(&std::fs::read_to_string(&path)?, false)?;
    let (stack, images) = stacked_skeleton_with_images(&model, &Method1Params::default())?;

    println!("{:>5} {:>8} {:>8} {:>6} {:>6} {:>6} {:>9}", "slice", "z_lo", "z_hi", "atoms", "comps", "iters", "skeleton");
    for s in &stack.slices {
        println!(
            "{:>5} {:>8.3} {:>8.3} {:>6} {:>6} {:>6} {:>9}",
            s.index, s.z_lo, s.z_hi, s.atoms, s.components, s.growth_iters, s.skeleton_pixels
        );
    }
    for img in &images {
        img.skeleton.write_pgm(out.join(format!("slice_{:03}_skeleton.pgm", img.index)))?;
    }
    stack.grid.write_pgm(out.join("stacked.pgm"))?;
    println!("stacked skeleton: {} px, images in {}", stack.grid.count_ones(), out.display());
    Ok(())
}
