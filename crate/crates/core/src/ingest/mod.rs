//! Structure ingestion: PDB parsing, cached download and point selection.

mod fetch;
mod pdb;
mod points;

pub use fetch::{
    default_cache_dir, fetch_structure, is_valid_pdb_id, FetchSource, Fetcher, HttpTransport,
    Transport, TransportError, CACHE_ENV, DEFAULT_URL_TEMPLATE,
};
pub use pdb::{parse_pdb, Atom, StructureModel};
pub use points::{normalize, renormalize, select_points, Frame, PointCloud, Selector};
