mod common;

use std::collections::HashSet;

use common::{genus2_graphs, genus3_graphs, random_coords, rng};
use kform_core::curves::*;
use kform_core::surface::{build_holonomy, presets, Holonomy};
use kform_core::Error;
use proptest::prelude::*;

fn signed_sum(h: &Holonomy, a: &CurveWord, b: &CurveWord) -> Option<i64> {
    match geometric_int_signed(h, a, b) {
        Ok(c) => Some(c.iter().map(|x| x.sign as i64).sum()),
        Err(Error::SharedGeodesic) => None,
        Err(e) => panic!("{a} vs {b}: {e}"),
    }
}

/// One orientation per geodesic, shortest first.
fn representatives(t: &CurveTable, k: usize) -> Vec<&CurveEntry> {
    let mut seen = HashSet::new();
    t.entries
        .iter()
        .filter(|e| seen.insert(e.word.canonical().min(e.word.inverse().canonical())))
        .take(k)
        .collect()
}

#[test]
fn signed_crossings_sum_to_algebraic_intersection() {
    let mut r = rng(3);
    let mut pairs = 0;
    for g in genus2_graphs().into_iter().chain(genus3_graphs()) {
        for _ in 0..3 {
            let x = random_coords(&mut r, g.n_edges(), 0.6, 1.8);
            let h = build_holonomy(&g, &x).unwrap();
            let p = pairing_matrix(&h).unwrap();
            let t = build_table(&h, 5.0, &EnumConfig::default()).unwrap();
            let reps = representatives(&t, 25);
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    let Some(s) = signed_sum(&h, &a.word, &b.word) else { continue };
                    let alg = algebraic_int(&a.homology, &b.homology, &p);
                    assert_eq!(s, alg, "{} vs {}", a.word, b.word);
                    let n = geometric_int(&h, &a.word, &b.word).unwrap();
                    assert!(alg.unsigned_abs() as usize <= n);
                    assert_eq!(n % 2, (alg.rem_euclid(2)) as usize, "parity of {} vs {}", a.word, b.word);
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 500, "only {pairs} pairs checked");
}

#[test]
fn reversing_orientation_negates_the_count() {
    let mut r = rng(5);
    for g in genus2_graphs() {
        let x = random_coords(&mut r, 3, 0.6, 1.8);
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 4.5, &EnumConfig::default()).unwrap();
        let reps = representatives(&t, 15);
        for a in &reps {
            for b in &reps {
                let Some(s) = signed_sum(&h, &a.word, &b.word) else { continue };
                assert_eq!(signed_sum(&h, &a.word.inverse(), &b.word), Some(-s));
                assert_eq!(signed_sum(&h, &b.word, &a.word), Some(-s));
                assert_eq!(
                    geometric_int(&h, &a.word, &b.word).unwrap(),
                    geometric_int(&h, &b.word.inverse(), &a.word).unwrap()
                );
            }
        }
    }
}

/// A geodesic appears at most once per orientation; two entries sharing length and
/// homology on a generic surface are the two orientations of one separating curve.
#[test]
fn table_entries_are_distinct_geodesics() {
    let mut r = rng(17);
    for g in genus2_graphs().into_iter().chain(genus3_graphs()) {
        let x = random_coords(&mut r, g.n_edges(), 0.7, 1.6);
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 5.0, &EnumConfig::default()).unwrap();
        let canon: HashSet<_> = t.entries.iter().map(|e| e.word.canonical()).collect();
        assert_eq!(canon.len(), t.len());
        for (i, a) in t.entries.iter().enumerate() {
            for b in &t.entries[i + 1..] {
                if (a.length - b.length).abs() < 1e-9 * a.length && a.homology == b.homology {
                    assert!(a.homology.is_zero());
                    assert_eq!(a.word.inverse().canonical(), b.word.canonical());
                    assert!(matches!(geometric_int_signed(&h, &a.word, &b.word), Err(Error::SharedGeodesic)));
                }
            }
        }
    }
}

#[test]
fn separating_curves_are_detected_by_homology() {
    let g = presets::genus3_separating_graph();
    let x = random_coords(&mut rng(2), 6, 0.8, 1.5);
    let h = build_holonomy(&g, &x).unwrap();
    let hb = HomologyBasis::new(&g);
    let sep: Vec<bool> = h.x_words.iter().map(|w| !is_nonseparating(&hb, w)).collect();
    assert_eq!(sep, [false, true, false, false, false, false]);
    let t = build_table(&h, 5.0, &EnumConfig::default()).unwrap();
    for e in &t.entries {
        assert_eq!(is_nonseparating(&hb, &e.word), !e.homology.is_zero());
    }
}

#[test]
fn dual_curve_powers() {
    for g in genus2_graphs() {
        let h = build_holonomy(&g, &random_coords(&mut rng(9), 3, 0.8, 2.0)).unwrap();
        for e in 0..3 {
            let Some(y) = h.y_words[e].clone() else { continue };
            let x = &h.x_words[e];
            assert_eq!(self_int_count(&h, &x.concat(&y)).unwrap(), 0);
            assert_eq!(self_int_count(&h, &x.concat(x).concat(&y)).unwrap(), 0);
            assert!(self_int_count(&h, &x.concat(x).concat(&y).concat(&y)).unwrap() >= 1);
        }
    }
}

proptest! {
    #[test]
    fn algebraic_pairing_is_bilinear_and_alternating(
        a in proptest::collection::vec(-5i64..5, 4),
        b in proptest::collection::vec(-5i64..5, 4),
        c in proptest::collection::vec(-5i64..5, 4),
        k in -4i64..4,
    ) {
        let h = build_holonomy(&presets::theta_graph(), &random_coords(&mut rng(1), 3, 1.0, 1.0)).unwrap();
        let p = pairing_matrix(&h).unwrap();
        let v = |x: Vec<i64>| HomologyClass { coords: x };
        let (a, b, c) = (v(a), v(b), v(c));
        prop_assert_eq!(algebraic_int(&a.add(&b), &c, &p), algebraic_int(&a, &c, &p) + algebraic_int(&b, &c, &p));
        prop_assert_eq!(algebraic_int(&a.scale(k), &c, &p), k * algebraic_int(&a, &c, &p));
        prop_assert_eq!(algebraic_int(&a, &b, &p), -algebraic_int(&b, &a, &p));
        prop_assert_eq!(algebraic_int(&a, &a, &p), 0);
    }
}
