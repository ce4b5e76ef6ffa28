//! End-to-end signatures and pairwise comparison.

mod cache;
mod compare;
mod method1;
mod method2;
mod params;

pub use cache::{content_digest, params_digest, CacheStats, SignatureCache};
pub use compare::{compare, ComparisonReport, FaceRow, ReportParams, CSV_HEADER, TOOL_VERSION};
pub use method1::{
    connect_slice, fractal_signature, rho, rho_value, stacked_skeleton, stacked_skeleton_with_images,
    FractalSignature, SliceGrowth, SliceImages, SliceReport, StackedSkeleton,
};
pub use method2::{geodesic_profile, profile_from_faces, render_faces, FaceCounts, GeodesicProfile};
pub(crate) use method1::signature_from_stack;
pub use params::{GrowthSpec, Method1Params, Method2Params, Thresholds, Verdict};
