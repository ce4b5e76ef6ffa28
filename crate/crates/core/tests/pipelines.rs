mod common;

use common::{fixture, lattice, map_coords};
use morphoprot::grid::Face;
use morphoprot::pipelines::{
    compare, fractal_signature, geodesic_profile, rho_value, stacked_skeleton, GeodesicProfile, Method1Params,
    Method2Params, Thresholds, Verdict,
};
use proptest::prelude::*;

#[test]
fn self_comparison_is_similar() {
    let m = fixture("bundle_b.pdb");
    let r = compare(&m, &m, &Method1Params::default(), &Method2Params::default(), Thresholds::default()).unwrap();
    assert_eq!(r.rho, 0.0);
    assert_eq!(r.profile.delta_p, 0);
    assert_eq!(r.verdict, Verdict::Similar);
}

#[test]
fn different_fixtures_are_dissimilar() {
    let a = fixture("helix_a.pdb");
    let b = fixture("bundle_b.pdb");
    let r = compare(&a, &b, &Method1Params::default(), &Method2Params::default(), Thresholds::default()).unwrap();
    assert!(r.rho > 0.008);
    assert!(r.profile.delta_p > 12);
    assert_eq!(r.verdict, Verdict::Dissimilar);
}

#[test]
fn signatures_are_rigid_and_scale_invariant() {
    let m1 = Method1Params::default();
    let m2 = Method2Params::default();
    for name in ["helix_a.pdb", "bundle_b.pdb", "sheet_c.pdb"] {
        let m = fixture(name);
        let base = fractal_signature(&m, &m1).unwrap();
        let moved = map_coords(&m, |[x, y, z]| [x + 13.25, y - 7.5, z + 101.0]);
        let scaled = map_coords(&m, |[x, y, z]| [2.5 * x, 2.5 * y, 2.5 * z]);
        for other in [&moved, &scaled] {
            assert_eq!(fractal_signature(other, &m1).unwrap().d_p.to_bits(), base.d_p.to_bits(), "{name}");
            let p = geodesic_profile(&m, other, &m2).unwrap();
            assert!(p.faces.iter().all(|c| c.source == c.target), "{name}: {p:?}");
        }
    }
}

#[test]
fn fixtures_have_plausible_dimension() {
    for name in ["helix_a.pdb", "bundle_b.pdb", "sheet_c.pdb"] {
        let s = fractal_signature(&fixture(name), &Method1Params::default()).unwrap();
        assert!((1.0..=2.0).contains(&s.d_p), "{name}: {}", s.d_p);
        assert!(s.r_squared > 0.9);
    }
}

#[test]
fn dense_lattice_fills_the_plane() {
    let s = fractal_signature(&lattice(64, 10), &Method1Params::default()).unwrap();
    assert!(s.d_p >= 1.9, "{}", s.d_p);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let a = fixture("helix_a.pdb");
    let b = fixture("sheet_c.pdb");
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            let stacked = stacked_skeleton(&a, &Method1Params::default()).unwrap();
            let r = compare(&a, &b, &Method1Params::default(), &Method2Params::default(), Thresholds::default())
                .unwrap();
            (stacked.grid, stacked.slices, r.to_json())
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn slice_metadata_is_consistent() {
    let m = fixture("bundle_b.pdb");
    let s = stacked_skeleton(&m, &Method1Params::default()).unwrap();
    assert_eq!(s.slices.iter().map(|r| r.atoms).sum::<usize>(), m.atoms.len());
    assert!(s.slices.windows(2).all(|w| w[0].index < w[1].index));
    assert!(s.slices.iter().all(|r| r.skeleton_pixels > 0));
    let cap = Method1Params::default().max_growth_iters;
    assert!(s.slices.iter().all(|r| r.connected || r.growth_iters == cap));
}

#[test]
fn published_face_counts() {
    let rows: [([usize; 6], [usize; 6], usize); 2] = [
        ([4, 4, 5, 6, 5, 3], [4, 4, 4, 6, 4, 3], 2),
        ([10, 6, 6, 7, 8, 10], [19, 19, 21, 18, 15, 19], 64),
    ];
    for (s, t, expected) in rows {
        let p = GeodesicProfile::from_counts(s, t);
        assert_eq!(p.delta_p, expected);
        assert_eq!(p.face(Face::Back).unwrap().source, s[5]);
    }
}

proptest! {
    #[test]
    fn rho_is_a_metric(a in 0.0f64..2.0, b in 0.0f64..2.0, c in 0.0f64..2.0) {
        prop_assert_eq!(rho_value(a, b), rho_value(b, a));
        prop_assert!(rho_value(a, b) >= 0.0);
        prop_assert_eq!(rho_value(a, a), 0.0);
        prop_assert!(rho_value(a, c) <= rho_value(a, b) + rho_value(b, c) + 1e-12);
    }

    #[test]
    fn delta_is_symmetric_and_audited(s in prop::array::uniform6(1usize..500), t in prop::array::uniform6(1usize..500)) {
        let st = GeodesicProfile::from_counts(s, t);
        let ts = GeodesicProfile::from_counts(t, s);
        prop_assert_eq!(st.delta_p, ts.delta_p);
        prop_assert_eq!(st.recomputed_delta(), st.delta_p);
        prop_assert_eq!(GeodesicProfile::from_counts(s, s).delta_p, 0);
    }
}
