use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StructureModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Angstrom,
    /// Centred and uniformly scaled into `[-1, 1]³`.
    Normalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<[f64; 3]>,
    pub frame: Frame,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 3]>, frame: Frame) -> Self {
        Self { points, frame }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn require(&self, frame: Frame) -> Result<()> {
        if self.frame == frame {
            Ok(())
        } else {
            Err(Error::WrongFrame {
                expected: match frame {
                    Frame::Angstrom => "angstrom",
                    Frame::Normalized => "normalized",
                },
            })
        }
    }
}

/// Which atoms feed a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    AllAtoms,
    /// Non-hetero atoms named `CA`, in file order.
    BackboneCa,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::AllAtoms => "all_atoms",
            Selector::BackboneCa => "backbone_ca",
        })
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "all_atoms" | "all" => Ok(Selector::AllAtoms),
            "backbone_ca" | "ca" => Ok(Selector::BackboneCa),
            other => Err(Error::InvalidParameter(format!("unknown selector {other:?}"))),
        }
    }
}

pub fn select_points(model: &StructureModel, selector: Selector) -> Result<PointCloud> {
    let points: Vec<[f64; 3]> = model
        .atoms
        .iter()
        .filter(|a| match selector {
            Selector::AllAtoms => true,
            Selector::BackboneCa => a.name == "CA" && !a.is_hetero,
        })
        .map(|a| a.position())
        .collect();
    if points.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(PointCloud::new(points, Frame::Angstrom))
}

/// Translates the centroid to the origin and divides every coordinate by
/// the largest resulting `|coordinate|`, so the cloud touches the unit cube.
/// A cloud with no extent collapses onto the origin.
pub fn normalize(cloud: &PointCloud) -> Result<PointCloud> {
    cloud.require(Frame::Angstrom)?;
    if cloud.is_empty() {
        return Err(Error::EmptySelection);
    }
    let n = cloud.len() as f64;
    let mut centroid = [0.0; 3];
    for p in &cloud.points {
        for k in 0..3 {
            centroid[k] += p[k];
        }
    }
    for c in &mut centroid {
        *c /= n;
    }
    let centred: Vec<[f64; 3]> = cloud
        .points
        .iter()
        .map(|p| [p[0] - centroid[0], p[1] - centroid[1], p[2] - centroid[2]])
        .collect();
    let extent = centred.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let points = if extent > 0.0 {
        centred.into_iter().map(|p| p.map(|v| (v / extent).clamp(-1.0, 1.0))).collect()
    } else {
        vec![[0.0; 3]; cloud.len()]
    };
    Ok(PointCloud::new(points, Frame::Normalized))
}

/// Re-normalizes a cloud already in the normalized frame.
pub fn renormalize(cloud: &PointCloud) -> Result<PointCloud> {
    normalize(&PointCloud::new(cloud.points.clone(), Frame::Angstrom))
}
