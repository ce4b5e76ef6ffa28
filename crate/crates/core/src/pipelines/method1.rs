//! Stacked-skeleton fractal signature.
//!
//! normalize → z-slices → per-slice raster → grow until one 8-connected
//! component → Lantuéjoul skeleton → OR over slices → box dimension.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GrowthSpec, Method1Params};
use crate::error::{Error, Result};
use crate::fractal::{box_counts, box_dimension, BoxCountSeries};
use crate::grid::{connected_components, distance_map, rasterize, slice_cloud, BinaryGrid, Connectivity};
use crate::ingest::{normalize, select_points, StructureModel};
use crate::morphology::skeletonize;

/// Outcome of growing one slice towards a single component.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceGrowth {
    pub grid: BinaryGrid,
    /// Growth step `k` at which the slice became connected (0 if it already was).
    pub iterations: usize,
    pub connected: bool,
    /// The input had no foreground at all.
    pub empty: bool,
}

/// Dilates `grid` by `growth.element(k)` for the smallest `k` in
/// `1..=max_iters` that leaves at most one 8-connected component. Each step
/// dilates the original grid, not the previous result.
///
/// Growth elements are metric balls, so the dilation at step `k` is a
/// threshold of one distance transform, and the component count cannot
/// increase with `k`; the smallest `k` is found by bisection.
pub fn connect_slice(grid: &BinaryGrid, growth: &GrowthSpec, max_iters: usize) -> SliceGrowth {
    let components = connected_components(grid, Connectivity::Eight);
    if components <= 1 {
        return SliceGrowth { grid: grid.clone(), iterations: 0, connected: true, empty: components == 0 };
    }
    let dist = distance_map(grid, growth.metric());
    let grown = |k: usize| dist.within(k * growth.step);
    let joined = |g: &BinaryGrid| connected_components(g, Connectivity::Eight) <= 1;
    let mut best = grown(max_iters);
    if !joined(&best) {
        return SliceGrowth { grid: best, iterations: max_iters, connected: false, empty: false };
    }
    let (mut lo, mut hi) = (1, max_iters);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let g = grown(mid);
        if joined(&g) {
            hi = mid;
            best = g;
        } else {
            lo = mid + 1;
        }
    }
    SliceGrowth { grid: best, iterations: hi, connected: true, empty: false }
}

/// Per-slice bookkeeping of the stacked-skeleton pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub index: usize,
    pub z_lo: f64,
    pub z_hi: f64,
    pub atoms: usize,
    /// 8-connected components of the raw slice raster.
    pub components: usize,
    pub growth_iters: usize,
    pub connected: bool,
    pub skeleton_pixels: usize,
}

/// Intermediate rasters of one slice, kept for rendering.
#[derive(Debug, Clone)]
pub struct SliceImages {
    pub index: usize,
    pub raster: BinaryGrid,
    pub grown: BinaryGrid,
    pub skeleton: BinaryGrid,
}

#[derive(Debug, Clone)]
pub struct StackedSkeleton {
    pub grid: BinaryGrid,
    pub slices: Vec<SliceReport>,
}

fn process_slices(model: &StructureModel, params: &Method1Params) -> Result<Vec<(SliceReport, SliceImages)>> {
    params.validate()?;
    let cloud = normalize(&select_points(model, params.selector)?)?;
    let slices = slice_cloud(&cloud, params.slice_thickness)?;
    let skeleton_se = params.skeleton_se.build()?;
    slices
        .par_iter()
        .map(|slice| {
            let raster = rasterize(&slice.points, params.resolution, params.dot_radius)?;
            let components = connected_components(&raster, Connectivity::Eight);
            let growth = connect_slice(&raster, &params.growth, params.max_growth_iters);
            let skeleton = skeletonize(&growth.grid, &skeleton_se)?.skeleton();
            let report = SliceReport {
                index: slice.index,
                z_lo: slice.z_lo,
                z_hi: slice.z_hi,
                atoms: slice.points.len(),
                components,
                growth_iters: growth.iterations,
                connected: growth.connected,
                skeleton_pixels: skeleton.count_ones(),
            };
            Ok((report, SliceImages { index: slice.index, raster, grown: growth.grid, skeleton }))
        })
        .collect()
}

fn stack(params: &Method1Params, per_slice: &[(SliceReport, SliceImages)]) -> BinaryGrid {
    let mut grid = BinaryGrid::square(params.resolution);
    for (_, images) in per_slice {
        grid.union_in_place(&images.skeleton).expect("all slices share the resolution");
    }
    grid
}

/// Union over z-slices of each slice's morphological skeleton.
pub fn stacked_skeleton(model: &StructureModel, params: &Method1Params) -> Result<StackedSkeleton> {
    let per_slice = process_slices(model, params)?;
    let grid = stack(params, &per_slice);
    Ok(StackedSkeleton { grid, slices: per_slice.into_iter().map(|(r, _)| r).collect() })
}

/// Like [`stacked_skeleton`] but also returns every slice's rasters.
pub fn stacked_skeleton_with_images(
    model: &StructureModel,
    params: &Method1Params,
) -> Result<(StackedSkeleton, Vec<SliceImages>)> {
    let per_slice = process_slices(model, params)?;
    let grid = stack(params, &per_slice);
    let (slices, images) = per_slice.into_iter().unzip();
    Ok((StackedSkeleton { grid, slices }, images))
}

/// `D_p` of one structure together with the settings that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalSignature {
    pub pdb_id: String,
    pub d_p: f64,
    pub r_squared: f64,
    pub slice_count: usize,
    pub params: Method1Params,
    pub series: BoxCountSeries,
}

pub fn fractal_signature(model: &StructureModel, params: &Method1Params) -> Result<FractalSignature> {
    let stacked = stacked_skeleton(model, params)?;
    signature_from_stack(&model.pdb_id, &stacked, params)
}

pub(crate) fn signature_from_stack(
    pdb_id: &str,
    stacked: &StackedSkeleton,
    params: &Method1Params,
) -> Result<FractalSignature> {
    if stacked.grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let series = box_counts(&stacked.grid, &params.box_sizes())?;
    let fit = box_dimension(&series)?;
    Ok(FractalSignature {
        pdb_id: pdb_id.to_string(),
        d_p: fit.dimension,
        r_squared: fit.r_squared,
        slice_count: stacked.slices.len(),
        params: params.clone(),
        series,
    })
}

/// `|D_p(a) - D_p(b)|`.
pub fn rho_value(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// `rho` between two signatures; they must share their parameters.
pub fn rho(a: &FractalSignature, b: &FractalSignature) -> Result<f64> {
    if a.params != b.params {
        return Err(Error::ParamsMismatch);
    }
    Ok(rho_value(a.d_p, b.d_p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SeShape;
    use crate::ingest::Atom;
    use crate::morphology::dilate;
    use proptest::prelude::*;

    /// Literal step-by-step growth.
    fn naive_connect(grid: &BinaryGrid, growth: &GrowthSpec, max_iters: usize) -> (BinaryGrid, usize, bool) {
        if connected_components(grid, Connectivity::Eight) <= 1 {
            return (grid.clone(), 0, true);
        }
        let mut grown = grid.clone();
        for k in 1..=max_iters {
            grown = dilate(grid, &growth.element(k));
            if connected_components(&grown, Connectivity::Eight) <= 1 {
                return (grown, k, true);
            }
        }
        (grown, max_iters, false)
    }

    fn shape() -> impl Strategy<Value = SeShape> {
        prop_oneof![Just(SeShape::Disk), Just(SeShape::Square), Just(SeShape::Cross)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bisection_matches_stepwise_growth(
            v in prop::collection::vec(prop::bool::weighted(0.01), 80 * 40),
            shape in shape(),
            step in 1usize..3,
            max_iters in 1usize..12,
        ) {
            let g = BinaryGrid::from_fn(80, 40, |x, y| v[y * 80 + x]);
            let growth = GrowthSpec { shape, step };
            let fast = connect_slice(&g, &growth, max_iters);
            let (grid, k, connected) = naive_connect(&g, &growth, max_iters);
            prop_assert_eq!(fast.iterations, k);
            prop_assert_eq!(fast.connected, connected);
            prop_assert_eq!(fast.grid, grid);
        }

        #[test]
        fn threshold_equals_dilation(
            v in prop::collection::vec(prop::bool::weighted(0.02), 70 * 20),
            shape in shape(),
            k in 1usize..9,
        ) {
            let g = BinaryGrid::from_fn(70, 20, |x, y| v[y * 70 + x]);
            let growth = GrowthSpec { shape, step: 1 };
            prop_assert_eq!(distance_map(&g, growth.metric()).within(k), dilate(&g, &growth.element(k)));
        }
    }

    fn atom(xyz: [f64; 3]) -> Atom {
        Atom {
            serial: 1,
            name: "CA".into(),
            residue_name: "GLY".into(),
            chain_id: 'A',
            residue_seq: 1,
            x: xyz[0],
            y: xyz[1],
            z: xyz[2],
            is_hetero: false,
        }
    }

    fn model(points: &[[f64; 3]]) -> StructureModel {
        StructureModel { pdb_id: "test".into(), atoms: points.iter().map(|&p| atom(p)).collect() }
    }

    #[test]
    fn connected_slice_is_untouched() {
        let blob = BinaryGrid::from_fn(32, 32, |x, y| (10..15).contains(&x) && (10..14).contains(&y));
        let g = connect_slice(&blob, &GrowthSpec { shape: SeShape::Disk, step: 1 }, 10);
        assert_eq!((g.iterations, g.connected, g.empty), (0, true, false));
        assert_eq!(g.grid, blob);
    }

    #[test]
    fn empty_slice_is_flagged() {
        let g = connect_slice(&BinaryGrid::square(16), &GrowthSpec { shape: SeShape::Disk, step: 1 }, 10);
        assert_eq!((g.iterations, g.empty), (0, true));
        assert!(g.grid.is_empty());
    }

    #[test]
    fn two_dots_ten_apart_join_at_five() {
        let mut grid = BinaryGrid::square(64);
        grid.set(20, 30, true);
        grid.set(30, 30, true);
        let g = connect_slice(&grid, &GrowthSpec { shape: SeShape::Disk, step: 1 }, 64);
        assert_eq!((g.iterations, g.connected), (5, true));
    }

    #[test]
    fn growth_limit_is_flagged() {
        let mut grid = BinaryGrid::square(64);
        grid.set(0, 0, true);
        grid.set(63, 63, true);
        let g = connect_slice(&grid, &GrowthSpec { shape: SeShape::Disk, step: 1 }, 3);
        assert_eq!((g.iterations, g.connected), (3, false));
    }

    #[test]
    fn single_atom_stacks_to_its_own_dot() {
        let params = Method1Params::default();
        let s = stacked_skeleton(&model(&[[4.0, 5.0, 6.0]]), &params).unwrap();
        let dot = rasterize(&[[0.0, 0.0]], params.resolution, params.dot_radius).unwrap();
        assert_eq!(s.grid, dot);
        assert_eq!(s.slices.len(), 1);
    }

    #[test]
    fn z_translation_by_slice_multiple() {
        let pts: Vec<[f64; 3]> = (0..30)
            .map(|i| {
                let t = i as f64 * 0.7;
                [10.0 * t.cos(), 10.0 * t.sin(), i as f64 * 1.5 - 20.0]
            })
            .collect();
        let shifted: Vec<[f64; 3]> = pts.iter().map(|p| [p[0], p[1], p[2] + 4.0]).collect();
        let params = Method1Params { resolution: 128, box_max: 32, ..Default::default() };
        let a = stacked_skeleton(&model(&pts), &params).unwrap();
        let b = stacked_skeleton(&model(&shifted), &params).unwrap();
        assert_eq!(a.grid, b.grid);
    }

    #[test]
    fn rho_requires_same_params() {
        let m = model(&[[0.0, 0.0, 0.0], [5.0, 1.0, 2.0], [1.0, 6.0, -3.0]]);
        let p = Method1Params { resolution: 64, box_max: 16, ..Default::default() };
        let a = fractal_signature(&m, &p).unwrap();
        assert_eq!(rho(&a, &a).unwrap(), 0.0);
        let q = Method1Params { dot_radius: 2, ..p };
        let b = fractal_signature(&m, &q).unwrap();
        assert!(matches!(rho(&a, &b), Err(Error::ParamsMismatch)));
        assert!((rho_value(1.661190, 1.656160) - 0.00503).abs() < 1e-9);
    }
}
