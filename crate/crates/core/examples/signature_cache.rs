//! Reuse fractal signatures across a batch through the on-disk cache.

use morphoprot::ingest::parse_pdb;
use morphoprot::pipelines::{content_digest, fractal_signature, rho, SignatureCache, Method1Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let dir = std::env::temp_dir().join("morphoprot-signature-cache-example");
    let params = Method1Params::default();

    for round in 1..=2 {
        let cache = SignatureCache::with_dir(&dir);
        let mut sigs = Vec::new();
        for name in ["helix_a", "bundle_b", "sheet_c", "helix_a"] {
            let text = std::fs::read_to_string(format!("{data}/{name}.pdb"))?;
            let key = format!("{name}-{}", &content_digest(text.as_bytes())[..16]);
            let model = parse_pdb(&text, false)?;
            sigs.push(cache.get_or_compute(&key, &params, || fractal_signature(&model, &params))?);
        }
        let stats = cache.stats();
        println!(
            "round {round}: {} computed, {} memory hits, {} disk hits",
            stats.computed, stats.memory_hits, stats.disk_hits
        );
        if round == 2 {
            for (i, a) in sigs.iter().enumerate().take(3) {
                for b in &sigs[i + 1..3] {
                    println!("  rho({}, {}) = {:.6}", a.pdb_id, b.pdb_id, rho(a, b)?);
                }
            }
        }
    }
    Ok(())
}
