//! Six-face geodesic profile.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Method2Params;
use crate::error::{Error, Result};
use crate::grid::{project_faces, Face, FaceSet};
use crate::ingest::{normalize, select_points, StructureModel};
use crate::morphology::geodesic_dilate_bounded;

/// Geodesic counts of one face for the source and target structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCounts {
    pub face: Face,
    pub source: usize,
    pub target: usize,
    /// The two renderings did not overlap; both counts were set to the cap.
    pub empty_marker: bool,
    /// Both dilations reached their fixed point within the cap.
    pub converged: bool,
}

impl FaceCounts {
    pub fn difference(&self) -> usize {
        self.source.abs_diff(self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicProfile {
    /// One entry per face in [`Face::ALL`] order.
    pub faces: Vec<FaceCounts>,
    pub delta_p: usize,
}

impl GeodesicProfile {
    /// Builds a profile from bare per-face counts in [`Face::ALL`] order.
    pub fn from_counts(source: [usize; 6], target: [usize; 6]) -> Self {
        let faces: Vec<FaceCounts> = Face::ALL
            .iter()
            .enumerate()
            .map(|(i, &face)| FaceCounts {
                face,
                source: source[i],
                target: target[i],
                empty_marker: false,
                converged: true,
            })
            .collect();
        let delta_p = faces.iter().map(FaceCounts::difference).sum();
        Self { faces, delta_p }
    }

    /// `sum |source - target|` over the stored faces.
    pub fn recomputed_delta(&self) -> usize {
        self.faces.iter().map(FaceCounts::difference).sum()
    }

    pub fn face(&self, face: Face) -> Option<&FaceCounts> {
        self.faces.iter().find(|c| c.face == face)
    }
}

/// Normalizes one structure on its own and renders its six faces.
pub fn render_faces(model: &StructureModel, params: &Method2Params) -> Result<FaceSet> {
    params.validate()?;
    let cloud = normalize(&select_points(model, params.selector)?)?;
    project_faces(&cloud, params.resolution, params.stroke_radius, params.trace)
}

/// Per face `i`: marker `f_i ∩ g_i`, then the number of geodesic dilation
/// steps needed to fill `f_i` and `g_i` from it.
pub fn profile_from_faces(source: &FaceSet, target: &FaceSet, params: &Method2Params) -> Result<GeodesicProfile> {
    let se = params.geodesic_se.build()?;
    let faces = Face::ALL
        .par_iter()
        .map(|&face| {
            let (f, g) = (source.get(face), target.get(face));
            let marker = f.intersection(g)?;
            if marker.is_empty() {
                return Ok(FaceCounts {
                    face,
                    source: params.max_iters,
                    target: params.max_iters,
                    empty_marker: true,
                    converged: false,
                });
            }
            let s = geodesic_dilate_bounded(&marker, f, &se, params.max_iters)?;
            let t = geodesic_dilate_bounded(&marker, g, &se, params.max_iters)?;
            Ok(FaceCounts {
                face,
                source: s.count,
                target: t.count,
                empty_marker: false,
                converged: s.converged && t.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let delta_p = faces.iter().map(FaceCounts::difference).sum();
    Ok(GeodesicProfile { faces, delta_p })
}

pub fn geodesic_profile(
    source: &StructureModel,
    target: &StructureModel,
    params: &Method2Params,
) -> Result<GeodesicProfile> {
    let (s, t) = rayon::join(|| render_faces(source, params), || render_faces(target, params));
    let (s, t) = (s?, t?);
    if s.resolution() != t.resolution() {
        return Err(Error::DimensionMismatch(s.resolution(), s.resolution(), t.resolution(), t.resolution()));
    }
    profile_from_faces(&s, &t, params)
}
