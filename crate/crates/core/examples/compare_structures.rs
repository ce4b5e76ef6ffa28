//! Full pairwise comparison of two PDB files.
//!
//! ```text
//! cargo run --release --example compare_structures -- a.pdb b.pdb
//! ```

use std::time::Instant;

use morphoprot::ingest::parse_pdb;
use morphoprot::pipelines::{compare, Method1Params, Method2Params, Thresholds};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (a, b) = match args.as_slice() {
        [a, b] => (a.clone(), b.clone()),
        _ => (format!("{data}/helix_a.pdb"), format!("{data}/sheet_c.pdb")),
    };
    let a = parse_pdb(&std::fs::read_to_string(a)?, false)?;
    let b = parse_pdb(&std::fs::read_to_string(b)?, false)?;

    let start = Instant::now();
    let report = compare(&a, &b, &Method1Params::default(), &Method2Params::default(), Thresholds::default())?;
    println!("{}", report.to_json());
    eprintln!("compared in {:.2?}", start.elapsed());
    Ok(())
}
