use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Built-in structuring element families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeShape {
    /// `(2k+1) x (2k+1)` block.
    Square,
    /// Digital disk `dx^2 + dy^2 <= r^2`.
    Disk,
    /// Origin plus its 4-neighbours; only size 1 exists.
    Cross,
}

impl SeShape {
    pub fn name(self) -> &'static str {
        match self {
            SeShape::Square => "square",
            SeShape::Disk => "disk",
            SeShape::Cross => "cross",
        }
    }
}

/// A built-in structuring element given by shape and size, e.g. `square:1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeSpec {
    pub shape: SeShape,
    pub size: usize,
}

impl SeSpec {
    pub const fn new(shape: SeShape, size: usize) -> Self {
        Self { shape, size }
    }

    pub fn build(&self) -> Result<StructuringElement> {
        StructuringElement::new(self.shape, self.size)
    }
}

impl fmt::Display for SeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.shape.name(), self.size)
    }
}

impl FromStr for SeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "square" => Ok(SeShape::Square),
            "disk" => Ok(SeShape::Disk),
            "cross" => Ok(SeShape::Cross),
            other => Err(Error::InvalidParameter(format!("unknown SE shape {other:?}"))),
        }
    }
}

impl FromStr for SeSpec {
    type Err = Error;

    /// Accepts `shape:size` or a bare shape (size 1).
    fn from_str(s: &str) -> Result<Self> {
        let (shape, size) = match s.split_once(':') {
            Some((shape, size)) => (
                shape.parse()?,
                size.trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad SE size in {s:?}")))?,
            ),
            None => (s.parse()?, 1),
        };
        let spec = SeSpec { shape, size };
        spec.build()?;
        Ok(spec)
    }
}

/// A finite set of integer offsets `(dx, dy)`.
///
/// Offsets are kept sorted by `(dy, dx)` and deduplicated, so two elements
/// with the same offsets compare equal regardless of construction order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructuringElement {
    offsets: Vec<(i32, i32)>,
}

/// One horizontal run of an SE: all `dx` in `dx_min..=dx_max` at row `dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Run {
    pub dy: i32,
    pub dx_min: i32,
    pub dx_max: i32,
}

impl StructuringElement {
    /// Builds one of the built-in shapes.
    pub fn new(shape: SeShape, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::UnsupportedSize { shape: shape.name(), size });
        }
        let k = i32::try_from(size)
            .map_err(|_| Error::UnsupportedSize { shape: shape.name(), size })?;
        let offsets = match shape {
            SeShape::Square => (-k..=k)
                .flat_map(|dy| (-k..=k).map(move |dx| (dx, dy)))
                .collect(),
            SeShape::Disk => {
                let r2 = i64::from(k) * i64::from(k);
                (-k..=k)
                    .flat_map(|dy| (-k..=k).map(move |dx| (dx, dy)))
                    .filter(|&(dx, dy)| i64::from(dx).pow(2) + i64::from(dy).pow(2) <= r2)
                    .collect()
            }
            SeShape::Cross => {
                if size != 1 {
                    return Err(Error::UnsupportedSize { shape: "cross", size });
                }
                vec![(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
            }
        };
        Ok(Self::from_offsets(offsets).expect("built-in shapes are non-empty"))
    }

    pub fn square(half_width: usize) -> Self {
        Self::new(SeShape::Square, half_width).expect("square of positive size")
    }

    pub fn disk(radius: usize) -> Self {
        Self::new(SeShape::Disk, radius).expect("disk of positive size")
    }

    pub fn cross() -> Self {
        Self::new(SeShape::Cross, 1).expect("cross of size 1")
    }

    /// The single-origin element `{(0, 0)}`.
    pub fn origin() -> Self {
        Self { offsets: vec![(0, 0)] }
    }

    /// Arbitrary offset set. Fails on an empty set.
    pub fn from_offsets(offsets: impl IntoIterator<Item = (i32, i32)>) -> Result<Self> {
        let set: BTreeSet<(i32, i32)> = offsets.into_iter().map(|(dx, dy)| (dy, dx)).collect();
        if set.is_empty() {
            return Err(Error::InvalidParameter("structuring element must be non-empty".into()));
        }
        Ok(Self { offsets: set.into_iter().map(|(dy, dx)| (dx, dy)).collect() })
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn contains(&self, offset: (i32, i32)) -> bool {
        self.offsets.binary_search_by_key(&(offset.1, offset.0), |&(dx, dy)| (dy, dx)).is_ok()
    }

    pub fn contains_origin(&self) -> bool {
        self.contains((0, 0))
    }

    /// Largest `max(|dx|, |dy|)` over all offsets.
    pub fn radius(&self) -> usize {
        self.offsets
            .iter()
            .map(|&(dx, dy)| dx.unsigned_abs().max(dy.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Point reflection `{-s : s in S}`.
    pub fn reflect(&self) -> Self {
        Self::from_offsets(self.offsets.iter().map(|&(dx, dy)| (-dx, -dy)))
            .expect("reflection of a non-empty set")
    }

    /// Minkowski sum `S ⊕ T`.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        Self::from_offsets(
            self.offsets
                .iter()
                .flat_map(|&(ax, ay)| other.offsets.iter().map(move |&(bx, by)| (ax + bx, ay + by))),
        )
        .expect("sum of non-empty sets")
    }

    /// `nS = S ⊕ S ⊕ … ⊕ S` (n copies); `0S = {(0, 0)}`.
    pub fn scale(&self, n: usize) -> Self {
        let mut acc = Self::origin();
        for _ in 0..n {
            acc = acc.minkowski_sum(self);
        }
        acc
    }

    /// Offsets grouped into maximal horizontal runs, sorted by `dy`.
    pub(crate) fn runs(&self) -> Vec<Run> {
        let mut runs: Vec<Run> = Vec::new();
        for &(dx, dy) in &self.offsets {
            match runs.last_mut() {
                Some(run) if run.dy == dy && run.dx_max + 1 == dx => run.dx_max = dx,
                _ => runs.push(Run { dy, dx_min: dx, dx_max: dx }),
            }
        }
        runs
    }
}

impl fmt::Debug for StructuringElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SE{:?}", self.offsets)
    }
}

/// Free-function form of [`StructuringElement::new`].
pub fn make_se(shape: SeShape, size: usize) -> Result<StructuringElement> {
    StructuringElement::new(shape, size)
}

/// Free-function form of [`StructuringElement::scale`].
pub fn scale_se(se: &StructuringElement, n: usize) -> StructuringElement {
    se.scale(n)
}
