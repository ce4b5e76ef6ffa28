//! Resolve PDB ids through the local structure cache.
//!
//! The cache is seeded from a bundled fixture so this runs offline; ids
//! missing from the cache are downloaded.

use morphoprot::ingest::{parse_pdb, FetchSource, Fetcher};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("morphoprot-fetch-example");
    let fetcher = Fetcher::new(&dir);
    let seed = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/helix_a.pdb");
    let path = fetcher.cache_path("9HLX");
    std::fs::create_dir_all(path.parent().unwrap_or(&dir))?;
    std::fs::copy(seed, &path)?;

    let ids: Vec<String> = std::env::args().skip(1).collect();
    let ids = if ids.is_empty() { vec!["9HLX".to_string()] } else { ids };
    for id in &ids {
        match fetcher.fetch_with_source(id) {
            Ok((text, source)) => {
                let how = match source {
                    FetchSource::Cache => "cached",
                    FetchSource::Network => "downloaded",
                };
                let model = parse_pdb(&text, false)?;
                println!("{id}: {how}, {} atoms, {}", model.len(), fetcher.cache_path(id).display());
            }
            Err(e) => println!("{id}: {e} (url {})", fetcher.url_for(id)),
        }
    }
    Ok(())
}
