//! Parse a PDB file, pick atoms and map them into the unit cube.

use morphoprot::ingest::{normalize, parse_pdb, select_points, Selector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/helix_a.pdb").into());
    let model = parse_pdb(&std::fs::read_to_string(&path)?, false)?;
    println!("{}: {} atoms", model.pdb_id, model.len());

    for selector in [Selector::AllAtoms, Selector::BackboneCa] {
        let cloud = normalize(&select_points(&model, selector)?)?;
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &cloud.points {
            for i in 0..3 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        println!("{selector:>12}: {:5} points, x [{:+.3}, {:+.3}] y [{:+.3}, {:+.3}] z [{:+.3}, {:+.3}]",
            cloud.len(), lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]);
    }
    Ok(())
}
