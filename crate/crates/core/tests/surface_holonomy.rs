mod common;

use common::{genus2_graphs, genus3_graphs, random_coords, rel, rng};
use kform_core::hyptrig::{arc_with_feet, perp_distinct};
use kform_core::surface::{build_holonomy, presets, validate, word_length, FNCoordinates};
use proptest::prelude::*;

#[test]
fn pants_lengths_recovered_on_random_surfaces() {
    let mut r = rng(11);
    for g in genus2_graphs().into_iter().chain(genus3_graphs()) {
        for _ in 0..25 {
            let x = random_coords(&mut r, g.n_edges(), 0.5, 3.0);
            let h = build_holonomy(&g, &x).unwrap();
            assert!(validate(&h).ok());
            for (e, w) in h.x_words.iter().enumerate() {
                assert!(rel(word_length(&h, w).unwrap(), x.lengths[e]) < 1e-9);
            }
        }
    }
}

/// On the symmetric surface each dual curve runs through both pants, meeting the
/// seams at feet offset by half a boundary length.
#[test]
fn dual_curves_match_offset_arc_formula() {
    let (g, x) = presets::symmetric_genus2();
    let h = build_holonomy(&g, &x).unwrap();
    let eta = perp_distinct(2.0, 2.0, 2.0).unwrap();
    let want = 2.0 * arc_with_feet(1.0, 0.0, eta).unwrap();
    assert!(rel(want, 4.315_879_814_969_434) < 1e-12);
    let ys: Vec<_> = h.y_words.iter().flatten().collect();
    assert_eq!(ys.len(), 3);
    for y in ys {
        assert!(rel(word_length(&h, y).unwrap(), want) < 1e-8, "{y}");
    }
}

#[test]
fn pinched_surface_still_validates() {
    let (g, mut x) = presets::symmetric_genus2();
    x.lengths[0] = 1e-4;
    let h = build_holonomy(&g, &x).unwrap();
    let v = validate(&h);
    assert!(v.ok(), "{:?}", v.defects);
    assert!(rel(word_length(&h, &h.x_words[0]).unwrap(), 1e-4) < 1e-9);
}

#[test]
fn invalid_inputs_are_rejected() {
    let g = presets::theta_graph();
    assert!(build_holonomy(&g, &FNCoordinates::new(vec![1.0, -1.0, 1.0], vec![0.0; 3])).is_err());
    assert!(build_holonomy(&g, &FNCoordinates::new(vec![1.0; 2], vec![0.0; 2])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn full_twist_preserves_pants_lengths(l in proptest::collection::vec(0.3f64..4.0, 3), t in proptest::collection::vec(-0.5f64..0.5, 3), e in 0usize..3) {
        let g = presets::theta_graph();
        let x = FNCoordinates::new(l, t);
        let h = build_holonomy(&g, &x.twisted(e, 1.0)).unwrap();
        for f in 0..3 {
            prop_assert!(rel(word_length(&h, &h.x_words[f]).unwrap(), x.lengths[f]) < 1e-9);
        }
    }
}
