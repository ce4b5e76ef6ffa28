//! Box-counting dimension of a binary grid.
//!
//! Boxes are anchored at pixel `(0, 0)`; a grid whose side is not a multiple
//! of the box size is treated as padded with background up to the next
//! multiple. Dyadic sizes are counted from an OR-pyramid: level `k` holds
//! one bit per `2^k x 2^k` box, so `n_r` is a popcount.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxCount {
    pub size: usize,
    pub occupied: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxCountSeries {
    pub entries: Vec<BoxCount>,
    /// Longer side of the counted grid.
    pub side: usize,
}

/// Slope and fit quality of `log n_r` against `log(1/r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub dimension: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1.0 when the counts are constant.
    pub r_squared: f64,
}

/// `{1, 2, 4, …, max}` with `max` rounded down to a power of two.
pub fn dyadic_sizes(min: usize, max: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut r = min.max(1).next_power_of_two();
    while r <= max {
        sizes.push(r);
        r *= 2;
    }
    sizes
}

/// Default scale set for a grid: `1 ..= side / 4`.
pub fn default_sizes(side: usize) -> Vec<usize> {
    dyadic_sizes(1, (side / 4).max(1))
}

/// Halves a grid: each output bit is the OR of a 2x2 block.
fn halve(g: &BinaryGrid) -> BinaryGrid {
    let (w, h) = (g.width().div_ceil(2), g.height().div_ceil(2));
    let mut out = BinaryGrid::new(w, h);
    for y in 0..h {
        let rows = [g.row(2 * y), g.row((2 * y + 1).min(g.height() - 1))];
        for (wi, word) in out.row_mut(y).iter_mut().enumerate() {
            let mut acc = 0u64;
            // output word wi covers source words 2wi and 2wi+1
            for half in 0..2 {
                let src = 2 * wi + half;
                if src >= rows[0].len() {
                    break;
                }
                let merged = rows[0][src] | rows[1][src];
                let pairs = (merged | (merged >> 1)) & 0x5555_5555_5555_5555;
                acc |= compress_even_bits(pairs) << (32 * half);
            }
            *word = acc;
        }
    }
    out
}

/// Packs bits 0, 2, 4, … of `x` into the low 32 bits.
fn compress_even_bits(mut x: u64) -> u64 {
    x &= 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x
}

/// Counts occupied `r x r` boxes for each requested size.
///
/// Sizes must be powers of two no larger than the grid's longer side; they
/// are reported in ascending order.
pub fn box_counts(grid: &BinaryGrid, sizes: &[usize]) -> Result<BoxCountSeries> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let side = grid.width().max(grid.height());
    let mut wanted: Vec<usize> = sizes.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if let Some(&bad) = wanted.iter().find(|&&r| !r.is_power_of_two() || r > side) {
        return Err(Error::InvalidBoxSize(bad));
    }
    let mut entries = Vec::with_capacity(wanted.len());
    let mut level = grid.clone();
    let mut r = 1;
    for &size in &wanted {
        while r < size {
            level = halve(&level);
            r *= 2;
        }
        entries.push(BoxCount { size, occupied: level.count_ones() });
    }
    Ok(BoxCountSeries { entries, side })
}

/// Least-squares slope of `ln n_r` against `ln(1/r)`.
pub fn box_dimension(series: &BoxCountSeries) -> Result<BoxDimension> {
    let n = series.entries.len();
    if n < 3 {
        return Err(Error::TooFewScales(n));
    }
    let xs: Vec<f64> = series.entries.iter().map(|e| -(e.size as f64).ln()).collect();
    let ys: Vec<f64> = series.entries.iter().map(|e| (e.occupied as f64).ln()).collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(BoxDimension { dimension: slope, intercept, r_squared })
}

impl BoxCountSeries {
    /// `r,n_r,log_inv_r,log_n_r` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,n_r,log_inv_r,log_n_r\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.size,
                e.occupied,
                -(e.size as f64).ln(),
                (e.occupied as f64).ln()
            );
        }
        out
    }
}
