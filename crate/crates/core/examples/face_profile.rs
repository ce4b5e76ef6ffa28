//! Project two structures onto the six cube faces and compare geodesic counts.

use morphoprot::ingest::parse_pdb;
use morphoprot::pipelines::{profile_from_faces, render_faces, Method2Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let load = |name: &str| -> Result<_, Box<dyn std::error::Error>> {
        Ok(parse_pdb(&std::fs::read_to_string(format!("{data}/{name}.pdb"))?, false)?)
    };
    let (s, t) = (load("helix_a")?, load("bundle_b")?);
    let params = Method2Params::default();

    let (fs, ft) = (render_faces(&s, &params)?, render_faces(&t, &params)?);
    for (face, grid) in fs.iter() {
        println!("{:>6}: source {:5} px, target {:5} px", face.name(), grid.count_ones(), ft.get(face).count_ones());
    }

    let profile = profile_from_faces(&fs, &ft, &params)?;
    println!("\n{:>6} {:>6} {:>6} {:>5}", "face", "s", "t", "|s-t|");
    for f in &profile.faces {
        let note = if f.empty_marker { "  (no overlap)" } else { "" };
        println!("{:>6} {:>6} {:>6} {:>5}{note}", f.face.name(), f.source, f.target, f.difference());
    }
    println!("delta_p = {}", profile.delta_p);
    Ok(())
}
