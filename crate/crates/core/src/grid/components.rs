use serde::{Deserialize, Serialize};

use super::BinaryGrid;

/// Pixel adjacency used for connected-component analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn neighbours(self) -> &'static [(i64, i64)] {
        const FOUR: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        const EIGHT: [(i64, i64); 8] =
            [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

impl TryFrom<u8> for Connectivity {
    type Error = crate::Error;

    fn try_from(n: u8) -> crate::Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(crate::Error::InvalidParameter(format!("connectivity must be 4 or 8, got {n}"))),
        }
    }
}

/// Component labels for every pixel; 0 is background, components are
/// numbered from 1 in row-major order of their first pixel.
#[derive(Debug, Clone)]
pub struct Labels {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub count: usize,
}

impl Labels {
    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Pixels carrying `label` as a grid.
    pub fn component(&self, label: u32) -> BinaryGrid {
        let mut g = BinaryGrid::new(self.width, self.height);
        for (i, &l) in self.labels.iter().enumerate() {
            if l == label {
                g.set(i % self.width, i / self.width, true);
            }
        }
        g
    }
}

pub fn label_components(grid: &BinaryGrid, connectivity: Connectivity) -> Labels {
    let (w, h) = (grid.width(), grid.height());
    let mut labels = vec![0u32; w * h];
    let mut count = 0u32;
    let mut stack = Vec::new();
    for (sx, sy) in grid.iter_ones() {
        if labels[sy * w + sx] != 0 {
            continue;
        }
        count += 1;
        labels[sy * w + sx] = count;
        stack.push((sx, sy));
        while let Some((x, y)) = stack.pop() {
            for &(dx, dy) in connectivity.neighbours() {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if !grid.get_signed(nx, ny) {
                    continue;
                }
                let idx = ny as usize * w + nx as usize;
                if labels[idx] == 0 {
                    labels[idx] = count;
                    stack.push((nx as usize, ny as usize));
                }
            }
        }
    }
    Labels { width: w, height: h, labels, count: count as usize }
}

/// Maximal runs of set bits in one row as inclusive `(start, end)` columns.
fn row_runs(row: &[u64], out: &mut Vec<(usize, usize)>) {
    out.clear();
    let mut open: Option<usize> = None;
    for (wi, &word) in row.iter().enumerate() {
        let base = wi * 64;
        let mut bit = 0u32;
        while bit < 64 {
            let rest = word >> bit;
            match open {
                None => {
                    if rest == 0 {
                        break;
                    }
                    bit += rest.trailing_zeros();
                    open = Some(base + bit as usize);
                }
                Some(start) => {
                    let ones = (!rest).trailing_zeros().min(64 - bit);
                    bit += ones;
                    if bit < 64 {
                        out.push((start, base + bit as usize - 1));
                        open = None;
                    }
                }
            }
        }
    }
    if let Some(start) = open {
        out.push((start, row.len() * 64 - 1));
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Number of maximal connected foreground regions.
///
/// Works on horizontal runs with a union-find over overlapping runs of
/// adjacent rows, so the cost scales with the number of runs rather than
/// the number of pixels.
pub fn connected_components(grid: &BinaryGrid, connectivity: Connectivity) -> usize {
    let reach = match connectivity {
        Connectivity::Four => 0,
        Connectivity::Eight => 1,
    };
    let mut parent: Vec<usize> = Vec::new();
    let mut prev: Vec<(usize, usize, usize)> = Vec::new();
    let mut cur: Vec<(usize, usize, usize)> = Vec::new();
    let mut runs = Vec::new();
    for y in 0..grid.height() {
        row_runs(grid.row(y), &mut runs);
        cur.clear();
        let mut j = 0;
        for &(start, end) in &runs {
            let id = parent.len();
            parent.push(id);
            // advance past previous-row runs that end too far left
            while j < prev.len() && prev[j].1 + reach < start {
                j += 1;
            }
            let mut k = j;
            while k < prev.len() && prev[k].0 <= end + reach {
                let (a, b) = (find(&mut parent, prev[k].2), find(&mut parent, id));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
                k += 1;
            }
            cur.push((start, end, id));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_grid_has_no_components() {
        assert_eq!(connected_components(&BinaryGrid::new(8, 8), Connectivity::Eight), 0);
    }

    #[test]
    fn diagonal_pair() {
        let g = BinaryGrid::from_ascii(&["#.", ".#"]).unwrap();
        assert_eq!(connected_components(&g, Connectivity::Four), 2);
        assert_eq!(connected_components(&g, Connectivity::Eight), 1);
    }

    #[test]
    fn runs_across_words() {
        let g = BinaryGrid::from_fn(200, 1, |x, _| (60..=70).contains(&x) || (127..=128).contains(&x) || x >= 190);
        let mut runs = Vec::new();
        row_runs(g.row(0), &mut runs);
        assert_eq!(runs, vec![(60, 70), (127, 128), (190, 199)]);
    }

    #[test]
    fn u_shape_merges_late() {
        let g = BinaryGrid::from_ascii(&["#.#.#", "#.#.#", "###.#"]).unwrap();
        assert_eq!(connected_components(&g, Connectivity::Four), 2);
        assert_eq!(label_components(&g, Connectivity::Four).count, 2);
    }

    proptest! {
        #[test]
        fn run_count_matches_flood_fill(v in prop::collection::vec(prop::bool::weighted(0.45), 90 * 12)) {
            let g = BinaryGrid::from_fn(90, 12, |x, y| v[y * 90 + x]);
            for c in [Connectivity::Four, Connectivity::Eight] {
                prop_assert_eq!(connected_components(&g, c), label_components(&g, c).count);
            }
        }
    }

    #[test]
    fn labels_are_row_major() {
        let g = BinaryGrid::from_ascii(&["#..#", "#..#", "..##"]).unwrap();
        let l = label_components(&g, Connectivity::Four);
        assert_eq!(l.count, 2);
        assert_eq!(l.label(0, 0), 1);
        assert_eq!(l.label(3, 0), 2);
        assert_eq!(l.component(2).count_ones(), 4);
    }
}
