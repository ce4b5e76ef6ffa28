use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A two-dimensional binary raster.
///
/// Rows are stored as packed `u64` words; column `x` of a row lives in bit
/// `x % 64` of word `x / 64`. Bits past `width` in the last word of a row
/// are always zero, so whole-word operations never see phantom pixels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryGrid {
    width: usize,
    height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryGrid {
    /// Creates an all-background grid.
    ///
    /// Panics if either dimension is zero; use [`BinaryGrid::try_new`] for a
    /// fallible constructor.
    pub fn new(width: usize, height: usize) -> Self {
        Self::try_new(width, height).expect("grid dimensions must be positive")
    }

    pub fn try_new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid dimensions must be positive, got {width}x{height}"
            )));
        }
        let words_per_row = width.div_ceil(WORD_BITS);
        Ok(Self {
            width,
            height,
            words_per_row,
            bits: vec![0; words_per_row * height],
        })
    }

    pub fn square(side: usize) -> Self {
        Self::new(side, side)
    }

    /// Builds a grid from a predicate evaluated at every `(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut grid = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    grid.set(x, y, true);
                }
            }
        }
        grid
    }

    /// Parses an ASCII picture: `#`, `1` or `x` are foreground, anything else
    /// background. All rows must have the same length.
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        if rows.iter().any(|r| r.chars().count() != width) {
            return Err(Error::InvalidParameter("ragged ascii grid".into()));
        }
        let mut grid = Self::try_new(width, height)?;
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                if matches!(c, '#' | '1' | 'x' | 'X') {
                    grid.set(x, y, true);
                }
            }
        }
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ))
        }
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub(crate) fn row(&self, y: usize) -> &[u64] {
        let start = y * self.words_per_row;
        &self.bits[start..start + self.words_per_row]
    }

    pub(crate) fn row_mut(&mut self, y: usize) -> &mut [u64] {
        let start = y * self.words_per_row;
        &mut self.bits[start..start + self.words_per_row]
    }

    /// Mask of valid bits in the last word of each row.
    pub(crate) fn tail_mask(&self) -> u64 {
        let used = self.width % WORD_BITS;
        if used == 0 {
            u64::MAX
        } else {
            (1u64 << used) - 1
        }
    }

    /// Zeroes any bits beyond `width`.
    pub(crate) fn clear_padding(&mut self) {
        let mask = self.tail_mask();
        if mask == u64::MAX {
            return;
        }
        let wpr = self.words_per_row;
        for row in self.bits.chunks_exact_mut(wpr) {
            row[wpr - 1] &= mask;
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        (self.bits[y * self.words_per_row + x / WORD_BITS] >> (x % WORD_BITS)) & 1 == 1
    }

    /// Like [`get`](Self::get) but treats everything outside the grid as background.
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.get(x as usize, y as usize)
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        let word = &mut self.bits[y * self.words_per_row + x / WORD_BITS];
        let bit = 1u64 << (x % WORD_BITS);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Coordinates of every set pixel in row-major order.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| {
            self.row(y).iter().enumerate().flat_map(move |(wi, &word)| {
                let mut w = word;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi * WORD_BITS + bit, y))
                })
            })
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, &b) in out.bits.iter_mut().zip(&other.bits) {
            *a = f(*a, b);
        }
        out.clear_padding();
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    /// Pixels of `self` that are not in `other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.bits {
            *w = !*w;
        }
        out.clear_padding();
        out
    }

    pub fn union_in_place(&mut self, other: &Self) -> Result<()> {
        self.check_shape(other)?;
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.same_shape(other) && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    /// Mirror image about the vertical axis (column `x` goes to `width - 1 - x`).
    pub fn flip_horizontal(&self) -> Self {
        let mut out = Self::new(self.width, self.height);
        for (x, y) in self.iter_ones() {
            out.set(self.width - 1 - x, y, true);
        }
        out
    }

    /// Renders the grid as `#`/`.` rows separated by newlines.
    pub fn to_ascii(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                s.push(if self.get(x, y) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BinaryGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryGrid({}x{}, {} set)", self.width, self.height, self.count_ones())?;
        if self.width <= 64 && self.height <= 64 {
            write!(f, "\n{}", self.to_ascii())?;
        }
        Ok(())
    }
}
