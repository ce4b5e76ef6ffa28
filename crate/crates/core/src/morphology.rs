//! Binary morphology on [`BinaryGrid`]s.
//!
//! Conventions shared by every operator here:
//!
//! * erosion keeps pixel `p` iff `p + s` is foreground for every offset `s`;
//! * dilation is the union of the shape translated by every offset;
//! * pixels outside the grid are background for both, so dilation clips at
//!   the border and erosion removes anything whose probe leaves the grid.
//!
//! The kernel works a whole row of packed words at a time. A structuring
//! element is split into horizontal runs; each distinct run becomes one
//! horizontal shift-and-combine pass (log-depth in the run length), and each
//! run row is then folded into the output with a vertical offset.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::se::Run;
use crate::grid::{BinaryGrid, StructuringElement};

/// `dst[x] = src[x - shift]`, with zeros shifted in and the padding of the
/// last word cleared.
fn shift_row(src: &[u64], dst: &mut [u64], shift: isize, tail_mask: u64) {
    let n = src.len();
    let ws = shift.unsigned_abs() / 64;
    let bs = (shift.unsigned_abs() % 64) as u32;
    if shift >= 0 {
        for i in 0..n {
            let lo = i.checked_sub(ws).map_or(0, |j| src[j]);
            let carry = if bs == 0 {
                0
            } else {
                i.checked_sub(ws + 1).map_or(0, |j| src[j] >> (64 - bs))
            };
            dst[i] = (lo << bs) | carry;
        }
    } else {
        for i in 0..n {
            let hi = src.get(i + ws).copied().unwrap_or(0);
            let carry = if bs == 0 { 0 } else { src.get(i + ws + 1).map_or(0, |w| w << (64 - bs)) };
            dst[i] = (hi >> bs) | carry;
        }
    }
    dst[n - 1] &= tail_mask;
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Combine {
    Or,
    And,
}

/// `out[x] = op_{t in 0..len} src[x + dir * t]` for `dir = ±1`.
fn spread(src: &[u64], out: &mut [u64], scratch: &mut [u64], len: i32, dir: isize, op: Combine, mask: u64) {
    out.copy_from_slice(src);
    let mut covered = 1;
    while covered < len {
        let step = covered.min(len - covered);
        // shift_row moves bits towards higher x, so reading x + t is a negative shift
        shift_row(out, scratch, -dir * step as isize, mask);
        for (o, &t) in out.iter_mut().zip(scratch.iter()) {
            match op {
                Combine::Or => *o |= t,
                Combine::And => *o &= t,
            }
        }
        covered += step;
    }
}

/// One horizontal run applied to a single row.
///
/// Dilation (`Or`): `out[x] = OR_{dx in [a, b]} src[x - dx]`.
/// Erosion (`And`): `out[x] = AND_{dx in [a, b]} src[x + dx]`.
///
/// The spread is done before the final shift so no intermediate value has
/// to live outside the row.
fn run_row(src: &[u64], out: &mut [u64], scratch: &mut [u64], a: i32, b: i32, op: Combine, mask: u64) {
    // Both cases reduce to `out[x] = op_{d in [lo, hi]} src[x + d]`.
    let (lo, hi) = match op {
        Combine::Or => (-b, -a),
        Combine::And => (a, b),
    };
    let mut tmp = vec![0u64; src.len()];
    if lo >= 0 {
        spread(src, &mut tmp, scratch, hi - lo + 1, 1, op, mask);
        shift_row(&tmp, out, -(lo as isize), mask);
    } else if hi <= 0 {
        spread(src, &mut tmp, scratch, hi - lo + 1, -1, op, mask);
        shift_row(&tmp, out, -(hi as isize), mask);
    } else {
        spread(src, out, scratch, hi + 1, 1, op, mask);
        spread(src, &mut tmp, scratch, -lo + 1, -1, op, mask);
        for (o, &t) in out.iter_mut().zip(&tmp) {
            match op {
                Combine::Or => *o |= t,
                Combine::And => *o &= t,
            }
        }
    }
}

/// Applies `run_row` to every row of `src`.
fn run_grid(src: &BinaryGrid, a: i32, b: i32, op: Combine) -> BinaryGrid {
    let mut out = BinaryGrid::new(src.width(), src.height());
    let mask = src.tail_mask();
    let mut scratch = vec![0u64; src.words_per_row()];
    for y in 0..src.height() {
        let mut row = vec![0u64; src.words_per_row()];
        run_row(src.row(y), &mut row, &mut scratch, a, b, op, mask);
        out.row_mut(y).copy_from_slice(&row);
    }
    out
}

fn apply(a: &BinaryGrid, se: &StructuringElement, op: Combine) -> BinaryGrid {
    let runs: Vec<Run> = se.runs();
    let mut by_span: HashMap<(i32, i32), BinaryGrid> = HashMap::new();
    for run in &runs {
        by_span
            .entry((run.dx_min, run.dx_max))
            .or_insert_with(|| run_grid(a, run.dx_min, run.dx_max, op));
    }

    let h = a.height() as i64;
    let mut out = BinaryGrid::new(a.width(), a.height());
    if op == Combine::And {
        let mask = out.tail_mask();
        for y in 0..a.height() {
            let row = out.row_mut(y);
            row.fill(u64::MAX);
            *row.last_mut().expect("non-empty row") &= mask;
        }
    }
    for run in &runs {
        let shifted = &by_span[&(run.dx_min, run.dx_max)];
        let dy = i64::from(run.dy);
        for y in 0..h {
            // dilation reads row y - dy, erosion row y + dy
            let src_y = match op {
                Combine::Or => y - dy,
                Combine::And => y + dy,
            };
            let out_row = out.row_mut(y as usize);
            if src_y < 0 || src_y >= h {
                if op == Combine::And {
                    out_row.fill(0);
                }
                continue;
            }
            let src_row = shifted.row(src_y as usize);
            for (o, &s) in out_row.iter_mut().zip(src_row) {
                match op {
                    Combine::Or => *o |= s,
                    Combine::And => *o &= s,
                }
            }
        }
    }
    out
}

/// `A ⊖ S`: pixels `p` with `p + s ∈ A` for every `s ∈ S`.
pub fn erode(a: &BinaryGrid, se: &StructuringElement) -> BinaryGrid {
    apply(a, se, Combine::And)
}

/// `A ⊕ S = {a + s}`, clipped to the grid.
pub fn dilate(a: &BinaryGrid, se: &StructuringElement) -> BinaryGrid {
    apply(a, se, Combine::Or)
}

/// `(A ⊖ S) ⊕ S`.
pub fn open(a: &BinaryGrid, se: &StructuringElement) -> BinaryGrid {
    dilate(&erode(a, se), se)
}

/// `(A ⊕ S) ⊖ S`.
pub fn close(a: &BinaryGrid, se: &StructuringElement) -> BinaryGrid {
    erode(&dilate(a, se), se)
}

/// `n` successive erosions by `se`.
pub fn erode_n(a: &BinaryGrid, se: &StructuringElement, n: usize) -> BinaryGrid {
    (0..n).fold(a.clone(), |acc, _| erode(&acc, se))
}

/// `n` successive dilations by `se`.
pub fn dilate_n(a: &BinaryGrid, se: &StructuringElement, n: usize) -> BinaryGrid {
    (0..n).fold(a.clone(), |acc, _| dilate(&acc, se))
}

/// One term `Sk_n` of a skeleton decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonLayer {
    pub scale: usize,
    pub grid: BinaryGrid,
}

/// Lantuéjoul decomposition `Sk_n = (A ⊖ nS) \ ((A ⊖ nS) ∘ S)`, `n = 0..=N`.
#[derive(Debug, Clone)]
pub struct SkeletonDecomposition {
    pub layers: Vec<SkeletonLayer>,
    pub se: StructuringElement,
    width: usize,
    height: usize,
}

impl SkeletonDecomposition {
    /// `N`, the last scale with a non-empty erosion; `None` for an empty shape.
    pub fn max_n(&self) -> Option<usize> {
        self.layers.last().map(|l| l.scale)
    }

    /// Set when the source shape had no foreground pixels.
    pub fn is_empty_shape(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Union of all layers: the morphological skeleton itself.
    pub fn skeleton(&self) -> BinaryGrid {
        let mut out = BinaryGrid::new(self.width, self.height);
        for layer in &self.layers {
            out.union_in_place(&layer.grid).expect("layers share the source shape");
        }
        out
    }
}

/// Computes `Sk_0 … Sk_N` for shape `a`.
///
/// The scale-`n` erosion is taken as `n` successive erosions by `se`. An
/// empty input yields a decomposition with no layers. `se` must contain the
/// origin and at least one other offset, otherwise the erosion chain never
/// shrinks.
pub fn skeletonize(a: &BinaryGrid, se: &StructuringElement) -> Result<SkeletonDecomposition> {
    if !se.contains_origin() || se.len() < 2 {
        return Err(Error::InvalidParameter(
            "skeleton structuring element must contain the origin and another offset".into(),
        ));
    }
    let mut layers = Vec::new();
    let mut eroded = a.clone();
    let mut n = 0;
    while !eroded.is_empty() {
        let next = erode(&eroded, se);
        // (A ⊖ nS) ∘ S = ((A ⊖ nS) ⊖ S) ⊕ S
        let opened = dilate(&next, se);
        let grid = eroded.difference(&opened).expect("same shape");
        layers.push(SkeletonLayer { scale: n, grid });
        eroded = next;
        n += 1;
    }
    Ok(SkeletonDecomposition {
        layers,
        se: se.clone(),
        width: a.width(),
        height: a.height(),
    })
}

/// `A' = ∪_n Sk_n ⊕ nS`, evaluated from the coarsest layer down so each
/// `⊕ nS` is `n` successive dilations by `S` (the inverse of how the layers
/// were eroded). Reproduces the source shape exactly.
pub fn reconstruct(sk: &SkeletonDecomposition) -> BinaryGrid {
    let mut acc = BinaryGrid::new(sk.width, sk.height);
    let mut scale = match sk.max_n() {
        Some(n) => n,
        None => return acc,
    };
    let mut layers = sk.layers.iter().rev().peekable();
    loop {
        while let Some(layer) = layers.next_if(|l| l.scale == scale) {
            acc.union_in_place(&layer.grid).expect("same shape");
        }
        if scale == 0 {
            break;
        }
        acc = dilate(&acc, &sk.se);
        scale -= 1;
    }
    acc
}

/// Result of iterating geodesic dilation to its fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicDilation {
    pub grid: BinaryGrid,
    /// Smallest `k >= 1` with `δᵏ = δᵏ⁻¹` (or the iteration cap when not converged).
    pub count: usize,
    pub converged: bool,
}

/// Iterates `δᵏ = (δᵏ⁻¹ ⊕ S) ∩ mask` from `δ⁰ = marker ∩ mask` until it stops
/// changing.
pub fn geodesic_dilate(
    marker: &BinaryGrid,
    mask: &BinaryGrid,
    se: &StructuringElement,
) -> Result<GeodesicDilation> {
    geodesic_dilate_bounded(marker, mask, se, usize::MAX)
}

/// As [`geodesic_dilate`], giving up after `max_iters` iterations.
pub fn geodesic_dilate_bounded(
    marker: &BinaryGrid,
    mask: &BinaryGrid,
    se: &StructuringElement,
    max_iters: usize,
) -> Result<GeodesicDilation> {
    let mut current = marker.intersection(mask)?;
    let mut k = 0;
    while k < max_iters {
        k += 1;
        let next = dilate(&current, se).intersection(mask)?;
        if next == current {
            return Ok(GeodesicDilation { grid: next, count: k, converged: true });
        }
        current = next;
    }
    Ok(GeodesicDilation { grid: current, count: k, converged: false })
}
