//! From normalized point clouds to binary rasters: z-slicing, dot
//! rasterization and the six orthographic face views.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BinaryGrid, StructuringElement};
use crate::error::{Error, Result};
use crate::ingest::{Frame, PointCloud};
use crate::morphology::dilate;

pub const MIN_RESOLUTION: usize = 8;

/// Atoms whose normalized z lies in `[z_lo, z_hi)` (the topmost slice is
/// closed at `+1`), projected onto the x-y plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    /// Position of the interval among all `ceil(2 / thickness)` intervals.
    pub index: usize,
    pub z_lo: f64,
    pub z_hi: f64,
    pub points: Vec<[f64; 2]>,
}

/// Cuts `[-1, 1]` into contiguous intervals of width `thickness` and returns
/// the non-empty ones in ascending z.
pub fn slice_cloud(cloud: &PointCloud, thickness: f64) -> Result<Vec<Slice>> {
    cloud.require(Frame::Normalized)?;
    if !(thickness > 0.0 && thickness <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "slice thickness must lie in (0, 2], got {thickness}"
        )));
    }
    let count = ((2.0 / thickness) - 1e-9).ceil().max(1.0) as usize;
    let lo = |i: usize| -1.0 + i as f64 * thickness;

    let mut buckets: Vec<Vec<[f64; 2]>> = vec![Vec::new(); count];
    for p in &cloud.points {
        let z = p[2];
        let mut i = (((z + 1.0) / thickness).floor().max(0.0) as usize).min(count - 1);
        // floor() on the quotient can land one interval off near boundaries
        while i + 1 < count && z >= lo(i + 1) {
            i += 1;
        }
        while i > 0 && z < lo(i) {
            i -= 1;
        }
        buckets[i].push([p[0], p[1]]);
    }
    Ok(buckets
        .into_iter()
        .enumerate()
        .filter(|(_, pts)| !pts.is_empty())
        .map(|(i, points)| Slice {
            index: i,
            z_lo: lo(i),
            z_hi: if i + 1 == count { 1.0 } else { lo(i + 1) },
            points,
        })
        .collect())
}

/// Pixel index of a normalized coordinate: `floor((v + 1) / 2 * resolution)`,
/// clamped into the grid.
pub fn pixel_index(v: f64, resolution: usize) -> usize {
    let raw = ((v + 1.0) / 2.0 * resolution as f64).floor();
    if raw.is_nan() || raw < 0.0 {
        0
    } else {
        (raw as usize).min(resolution - 1)
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    Ok(())
}

fn stroke(grid: BinaryGrid, radius: usize) -> BinaryGrid {
    if radius == 0 {
        grid
    } else {
        dilate(&grid, &StructuringElement::disk(radius))
    }
}

/// Plots each `(x, y)` as a pixel (column from x, row from y) and thickens
/// the dots with a disk of `dot_radius`.
pub fn rasterize(points: &[[f64; 2]], resolution: usize, dot_radius: usize) -> Result<BinaryGrid> {
    check_resolution(resolution)?;
    let mut grid = BinaryGrid::square(resolution);
    for p in points {
        grid.set(pixel_index(p[0], resolution), pixel_index(p[1], resolution), true);
    }
    Ok(stroke(grid, dot_radius))
}

/// Sets every pixel of the Bresenham segment between two pixels.
pub fn draw_line(grid: &mut BinaryGrid, from: (usize, usize), to: (usize, usize)) {
    let (mut x0, mut y0) = (from.0 as i64, from.1 as i64);
    let (x1, y1) = (to.0 as i64, to.1 as i64);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        grid.set(x0 as usize, y0 as usize, true);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// The six axis-aligned views, in the column order used for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    Front,
    Left,
    Right,
    Top,
    Bottom,
    Back,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::Front, Face::Left, Face::Right, Face::Top, Face::Bottom, Face::Back];

    pub fn name(self) -> &'static str {
        match self {
            Face::Front => "front",
            Face::Left => "left",
            Face::Right => "right",
            Face::Top => "top",
            Face::Bottom => "bottom",
            Face::Back => "back",
        }
    }

    /// Screen coordinates `(horizontal, vertical)` of a 3D point for this
    /// view. `Back` is derived from `Front` by mirroring and has no
    /// projection of its own.
    fn project(self, p: &[f64; 3]) -> Option<[f64; 2]> {
        let [x, y, z] = *p;
        match self {
            Face::Front => Some([x, y]),
            Face::Right => Some([-z, y]),
            Face::Left => Some([z, y]),
            Face::Top => Some([x, -z]),
            Face::Bottom => Some([x, z]),
            Face::Back => None,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Six same-sized renderings of one structure.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSet {
    faces: [BinaryGrid; 6],
}

impl FaceSet {
    pub fn get(&self, face: Face) -> &BinaryGrid {
        &self.faces[face as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Face, &BinaryGrid)> {
        Face::ALL.into_iter().zip(self.faces.iter())
    }

    pub fn resolution(&self) -> usize {
        self.faces[0].width()
    }
}

fn render_view(points: &[[f64; 2]], resolution: usize, stroke_radius: usize, trace: bool) -> BinaryGrid {
    let mut grid = BinaryGrid::square(resolution);
    let pixels: Vec<(usize, usize)> = points
        .iter()
        .map(|p| (pixel_index(p[0], resolution), pixel_index(p[1], resolution)))
        .collect();
    for &(x, y) in &pixels {
        grid.set(x, y, true);
    }
    if trace {
        for pair in pixels.windows(2) {
            draw_line(&mut grid, pair[0], pair[1]);
        }
    }
    stroke(grid, stroke_radius)
}

/// Orthographic front/left/right/top/bottom views of a normalized cloud;
/// the back view is the front mirrored about the vertical axis. With
/// `trace`, consecutive points are joined by line segments first.
pub fn project_faces(cloud: &PointCloud, resolution: usize, stroke_radius: usize, trace: bool) -> Result<FaceSet> {
    cloud.require(Frame::Normalized)?;
    check_resolution(resolution)?;
    if cloud.is_empty() {
        return Err(Error::EmptySelection);
    }
    let view = |face: Face| {
        let pts: Vec<[f64; 2]> = cloud.points.iter().filter_map(|p| face.project(p)).collect();
        render_view(&pts, resolution, stroke_radius, trace)
    };
    let front = view(Face::Front);
    let back = front.flip_horizontal();
    Ok(FaceSet {
        faces: [front, view(Face::Left), view(Face::Right), view(Face::Top), view(Face::Bottom), back],
    })
}
