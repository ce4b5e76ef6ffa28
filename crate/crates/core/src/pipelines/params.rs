use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal::dyadic_sizes;
use crate::grid::{Metric, SeShape, SeSpec, StructuringElement, MIN_RESOLUTION};
use crate::ingest::Selector;

/// Slice growth: at iteration `k` the raw slice is dilated by the element of
/// this shape at size `k * step` (a disk of radius `k * step`, a square of
/// half-width `k * step`, or `k * step` copies of the cross).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSpec {
    pub shape: SeShape,
    pub step: usize,
}

impl GrowthSpec {
    /// Every growth element is the ball of radius `k * step` in this metric.
    pub fn metric(&self) -> Metric {
        match self.shape {
            SeShape::Disk => Metric::Euclidean,
            SeShape::Square => Metric::Chebyshev,
            SeShape::Cross => Metric::Manhattan,
        }
    }

    pub fn element(&self, k: usize) -> StructuringElement {
        let size = k * self.step;
        match self.shape {
            SeShape::Cross => StructuringElement::cross().scale(size),
            shape => StructuringElement::new(shape, size.max(1)).expect("positive size"),
        }
    }
}

/// Stacked-skeleton fractal signature settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Method1Params {
    pub selector: Selector,
    pub slice_thickness: f64,
    pub resolution: usize,
    pub dot_radius: usize,
    pub growth: GrowthSpec,
    pub max_growth_iters: usize,
    pub skeleton_se: SeSpec,
    pub box_min: usize,
    pub box_max: usize,
}

impl Default for Method1Params {
    fn default() -> Self {
        Self {
            selector: Selector::AllAtoms,
            slice_thickness: 0.1,
            resolution: 512,
            dot_radius: 1,
            growth: GrowthSpec { shape: SeShape::Disk, step: 1 },
            max_growth_iters: 64,
            skeleton_se: SeSpec::new(SeShape::Square, 1),
            box_min: 1,
            box_max: 128,
        }
    }
}

impl Method1Params {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.slice_thickness > 0.0 && self.slice_thickness <= 2.0) {
            return bad(format!("slice thickness {} outside (0, 2]", self.slice_thickness));
        }
        if self.resolution < MIN_RESOLUTION {
            return bad(format!("resolution {} below {MIN_RESOLUTION}", self.resolution));
        }
        if self.growth.step == 0 || self.max_growth_iters == 0 {
            return bad("growth step and max growth iterations must be positive".into());
        }
        self.skeleton_se.build()?;
        if self.box_sizes().len() < 3 {
            return bad(format!(
                "box sizes {}..={} give fewer than 3 dyadic scales",
                self.box_min, self.box_max
            ));
        }
        if self.box_max > self.resolution {
            return bad(format!("box size {} exceeds resolution {}", self.box_max, self.resolution));
        }
        Ok(())
    }

    pub fn box_sizes(&self) -> Vec<usize> {
        dyadic_sizes(self.box_min, self.box_max)
    }
}

/// Six-face geodesic profile settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Method2Params {
    pub selector: Selector,
    pub resolution: usize,
    pub stroke_radius: usize,
    pub trace: bool,
    pub geodesic_se: SeSpec,
    pub max_iters: usize,
}

impl Default for Method2Params {
    fn default() -> Self {
        Self {
            selector: Selector::BackboneCa,
            resolution: 256,
            stroke_radius: 2,
            trace: true,
            geodesic_se: SeSpec::new(SeShape::Square, 1),
            max_iters: 10_000,
        }
    }
}

impl Method2Params {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::InvalidParameter(format!(
                "face resolution {} below {MIN_RESOLUTION}",
                self.resolution
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        self.geodesic_se.build()?;
        Ok(())
    }
}

/// Similarity cut-offs: a pair is similar iff `rho <= rho` and `delta_p <= delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub rho: f64,
    pub delta: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { rho: 0.008, delta: 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Similar,
    Dissimilar,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Similar => "similar",
            Verdict::Dissimilar => "dissimilar",
        }
    }
}

impl Thresholds {
    pub fn verdict(&self, rho: f64, delta_p: usize) -> Verdict {
        if rho <= self.rho && delta_p <= self.delta {
            Verdict::Similar
        } else {
            Verdict::Dissimilar
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Method1Params::default().validate().unwrap();
        Method2Params::default().validate().unwrap();
        assert_eq!(Method1Params::default().box_sizes(), vec![1, 2, 4, 8, 16, 32, 64, 128]);
    }

    #[test]
    fn invalid_params() {
        let p = Method1Params { slice_thickness: 0.0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = Method1Params { box_min: 32, box_max: 64, ..Default::default() };
        assert!(p.validate().is_err());
        let p = Method1Params { resolution: 64, ..Default::default() };
        assert!(p.validate().is_err());
        let p = Method2Params { max_iters: 0, ..Default::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn growth_elements() {
        let g = GrowthSpec { shape: SeShape::Disk, step: 2 };
        assert_eq!(g.element(3), StructuringElement::disk(6));
        let g = GrowthSpec { shape: SeShape::Cross, step: 1 };
        assert_eq!(g.element(2).len(), 13);
    }

    #[test]
    fn verdict_rule() {
        let t = Thresholds::default();
        assert_eq!(t.verdict(0.00503, 2), Verdict::Similar);
        assert_eq!(t.verdict(0.04105, 24), Verdict::Dissimilar);
        assert_eq!(t.verdict(0.0, 0), Verdict::Similar);
        assert_eq!(t.verdict(0.008, 12), Verdict::Similar);
        assert_eq!(t.verdict(0.0081, 0), Verdict::Dissimilar);
        assert_eq!(t.verdict(0.0, 13), Verdict::Dissimilar);
    }
}
