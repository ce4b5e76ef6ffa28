//! Portable anymap encoding of binary grids.
//!
//! * P4 (`to_pbm`): row-major, one bit per pixel, MSB first, each row padded
//!   to a whole byte; a set bit is a foreground pixel.
//! * P5 (`to_pgm`): one byte per pixel, foreground 0 (black) on background
//!   255 (white), maxval 255.
//!
//! Headers are always `P4\n<w> <h>\n` / `P5\n<w> <h>\n255\n`, so the output
//! bytes depend only on the grid.

use std::fs;
use std::path::Path;

use super::BinaryGrid;
use crate::error::{Error, Result};

impl BinaryGrid {
    pub fn to_pbm(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width(), self.height()).into_bytes();
        let bytes_per_row = self.width().div_ceil(8);
        for y in 0..self.height() {
            let mut row = vec![0u8; bytes_per_row];
            for x in 0..self.width() {
                if self.get(x, y) {
                    row[x / 8] |= 0x80 >> (x % 8);
                }
            }
            out.extend_from_slice(&row);
        }
        out
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width(), self.height()).into_bytes();
        out.reserve(self.width() * self.height());
        for y in 0..self.height() {
            for x in 0..self.width() {
                out.push(if self.get(x, y) { 0 } else { 255 });
            }
        }
        out
    }

    /// Writes a P5 file.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_pgm())?;
        Ok(())
    }

    /// Decodes P4 or P5 data. For P5 any pixel below half of maxval counts
    /// as foreground.
    pub fn from_pnm(data: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let magic = next_token(data, &mut pos)?;
        let width = parse_num(next_token(data, &mut pos)?)?;
        let height = parse_num(next_token(data, &mut pos)?)?;
        let maxval = match magic {
            b"P4" => 1,
            b"P5" => parse_num(next_token(data, &mut pos)?)?,
            _ => return Err(Error::InvalidImage("expected P4 or P5 magic".into())),
        };
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let body = data.get(pos..).unwrap_or_default();
        let mut grid = BinaryGrid::try_new(width, height)?;
        if magic == b"P4" {
            let bpr = width.div_ceil(8);
            if body.len() < bpr * height {
                return Err(Error::InvalidImage("truncated P4 raster".into()));
            }
            for y in 0..height {
                for x in 0..width {
                    if body[y * bpr + x / 8] & (0x80 >> (x % 8)) != 0 {
                        grid.set(x, y, true);
                    }
                }
            }
        } else {
            if maxval == 0 || maxval > 255 {
                return Err(Error::InvalidImage(format!("unsupported maxval {maxval}")));
            }
            if body.len() < width * height {
                return Err(Error::InvalidImage("truncated P5 raster".into()));
            }
            for y in 0..height {
                for x in 0..width {
                    if (body[y * width + x] as usize) * 2 < maxval {
                        grid.set(x, y, true);
                    }
                }
            }
        }
        Ok(grid)
    }
}

fn next_token<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::InvalidImage("truncated header".into()));
    }
    Ok(&data[start..*pos])
}

fn parse_num(token: &[u8]) -> Result<usize> {
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidImage("bad header number".into()))
}
