//! Protein tertiary structure comparison with binary mathematical morphology.
//!
//! Two signatures are computed per structure:
//!
//! * **D_p**, the box-counting dimension of the stacked per-slice
//!   morphological skeletons ([`pipelines::fractal_signature`]);
//! * six **geodesic dilation counts**, one per orthographic face, measured
//!   from the intersection of two structures' renderings towards each of
//!   them ([`pipelines::geodesic_profile`]).
//!
//! [`pipelines::compare`] combines them into `rho = |D_p(a) - D_p(b)|` and
//! `delta_p = sum |count_a - count_b|`, and calls the pair similar when both
//! fall under their thresholds (0.008 and 12 by default).
//!
//! The building blocks are usable on their own: [`ingest`] reads PDB files,
//! [`grid`] holds the bit-packed raster and structuring elements,
//! [`morphology`] the erosion/dilation kernel, skeletons and geodesic
//! dilation, and [`fractal`] the box counter.

pub mod cli;
pub mod error;
pub mod fractal;
pub mod grid;
pub mod ingest;
pub mod morphology;
pub mod pipelines;

pub use error::{Error, Result};
