//! Binary rasters, structuring elements, rasterization, component labeling
//! and distance transforms.

mod bitgrid;
mod components;
mod distance;
mod pnm;
mod raster;
pub(crate) mod se;

pub use bitgrid::BinaryGrid;
pub use components::{connected_components, label_components, Connectivity, Labels};
pub use distance::{distance_map, DistanceMap, Metric};
pub use raster::{
    draw_line, pixel_index, project_faces, rasterize, slice_cloud, Face, FaceSet, Slice,
    MIN_RESOLUTION,
};
pub use se::{make_se, scale_se, SeShape, SeSpec, StructuringElement};
