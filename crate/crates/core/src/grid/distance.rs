use super::BinaryGrid;

const INF: u64 = u64::MAX / 4;

/// Distance used by [`distance_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Stored squared, so every value is an exact integer.
    Euclidean,
    Chebyshev,
    Manhattan,
}

/// Distance from every pixel to the nearest foreground pixel.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    width: usize,
    height: usize,
    metric: Metric,
    values: Vec<u64>,
}

impl DistanceMap {
    /// Raw value at `(x, y)`; squared for [`Metric::Euclidean`], `None` on an empty grid.
    pub fn raw(&self, x: usize, y: usize) -> Option<u64> {
        let v = self.values[y * self.width + x];
        (v < INF).then_some(v)
    }

    /// Pixels within distance `radius` of the foreground.
    pub fn within(&self, radius: usize) -> BinaryGrid {
        let r = radius as u64;
        let limit = match self.metric {
            Metric::Euclidean => r.saturating_mul(r),
            Metric::Chebyshev | Metric::Manhattan => r,
        };
        let mut out = BinaryGrid::new(self.width, self.height);
        for y in 0..self.height {
            let src = &self.values[y * self.width..(y + 1) * self.width];
            for (word, chunk) in out.row_mut(y).iter_mut().zip(src.chunks(64)) {
                *word = chunk
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &d)| acc | (u64::from(d < INF && d <= limit) << i));
            }
        }
        out
    }
}

/// Exact distance transform of `grid` under `metric`.
pub fn distance_map(grid: &BinaryGrid, metric: Metric) -> DistanceMap {
    let (w, h) = (grid.width(), grid.height());
    let mut values = vec![INF; w * h];
    for (x, y) in grid.iter_ones() {
        values[y * w + x] = 0;
    }
    match metric {
        Metric::Euclidean => squared_euclidean(&mut values, w, h),
        Metric::Chebyshev => chamfer(&mut values, w, h, true),
        Metric::Manhattan => chamfer(&mut values, w, h, false),
    }
    DistanceMap { width: w, height: h, metric, values }
}

/// Two-pass unit chamfer; exact for the L1 (4-neighbour) and L∞ (8-neighbour) metrics.
fn chamfer(d: &mut [u64], w: usize, h: usize, diagonal: bool) {
    for y in 0..h {
        for x in 0..w {
            let mut best = d[y * w + x];
            if x > 0 {
                best = best.min(d[y * w + x - 1] + 1);
            }
            if y > 0 {
                best = best.min(d[(y - 1) * w + x] + 1);
                if diagonal && x > 0 {
                    best = best.min(d[(y - 1) * w + x - 1] + 1);
                }
                if diagonal && x + 1 < w {
                    best = best.min(d[(y - 1) * w + x + 1] + 1);
                }
            }
            d[y * w + x] = best;
        }
    }
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let mut best = d[y * w + x];
            if x + 1 < w {
                best = best.min(d[y * w + x + 1] + 1);
            }
            if y + 1 < h {
                best = best.min(d[(y + 1) * w + x] + 1);
                if diagonal && x + 1 < w {
                    best = best.min(d[(y + 1) * w + x + 1] + 1);
                }
                if diagonal && x > 0 {
                    best = best.min(d[(y + 1) * w + x - 1] + 1);
                }
            }
            d[y * w + x] = best;
        }
    }
}

/// Lower envelope of parabolas, one dimension at a time.
fn squared_euclidean(d: &mut [u64], w: usize, h: usize) {
    let n = w.max(h);
    let (mut f, mut out) = (vec![0u64; n], vec![0u64; n]);
    let (mut v, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for x in 0..w {
        for y in 0..h {
            f[y] = d[y * w + x];
        }
        envelope(&f[..h], &mut out[..h], &mut v, &mut z);
        for y in 0..h {
            d[y * w + x] = out[y];
        }
    }
    for y in 0..h {
        let row = &mut d[y * w..(y + 1) * w];
        f[..w].copy_from_slice(row);
        envelope(&f[..w], row, &mut v, &mut z);
    }
}

fn envelope(f: &[u64], out: &mut [u64], v: &mut Vec<usize>, z: &mut Vec<f64>) {
    v.clear();
    z.clear();
    let height = |q: usize| f[q] as f64 + (q * q) as f64;
    for q in (0..f.len()).filter(|&q| f[q] < INF) {
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&p) => {
                    let s = (height(q) - height(p)) / (2.0 * (q - p) as f64);
                    if s <= *z.last().expect("z tracks v") {
                        v.pop();
                        z.pop();
                    } else {
                        v.push(q);
                        z.push(s);
                        break;
                    }
                }
            }
        }
    }
    if v.is_empty() {
        out.fill(INF);
        return;
    }
    let mut j = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while j + 1 < v.len() && z[j + 1] < q as f64 {
            j += 1;
        }
        let p = v[j];
        *o = (q.abs_diff(p) as u64).pow(2) + f[p];
    }
}
