mod common;

use common::{genus2_graphs, genus3_graphs, random_coords, rel, rng};
use kform_core::curves::{build_table, CurveWord, EnumConfig, Letter};
use kform_core::deform::*;
use kform_core::hyptrig::A1;
use kform_core::surface::{build_holonomy, presets, word_length, FNCoordinates, PantsGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// T_e^n(w) written on the original marking: each crossing of `e` picks up n turns
/// around the endpoint-B boundary.
fn twisted_word(g: &PantsGraph, w: &CurveWord, e: usize, n: i32) -> CurveWord {
    let b = g.edges[e][1];
    let turn = Letter::Loop { pants: b.pants as u16, slot: b.slot as u8, pow: n };
    let mut out = Vec::new();
    for &l in &w.letters {
        match l {
            Letter::Cross { edge, fwd: true } if edge as usize == e => out.extend([l, turn.inverse()]),
            Letter::Cross { edge, fwd: false } if edge as usize == e => out.extend([turn, l]),
            _ => out.push(l),
        }
    }
    CurveWord::new(out)
}

#[test]
fn twist_shift_equals_marking_change() {
    let mut r = rng(21);
    let mut compared = 0;
    for g in genus2_graphs().into_iter().chain(genus3_graphs()) {
        for _ in 0..5 {
            let x = random_coords(&mut r, g.n_edges(), 0.8, 1.6);
            let h = build_holonomy(&g, &x).unwrap();
            let t = build_table(&h, 7.0, &EnumConfig::default()).unwrap();
            let crossing: Vec<_> = t.entries.iter().filter(|e| e.word.crossings() > 0).collect();
            let entry = crossing.choose(&mut r).expect("a curve crossing some pants curve");
            let e = r.gen_range(0..g.n_edges());
            let orbit = twist_orbit(&g, &x, &entry.word, e, 3).unwrap();
            assert_eq!(orbit.disjoint, entry.crossings[e] == 0);
            for &(n, l) in &orbit.sweep {
                let want = word_length(&h, &twisted_word(&g, &entry.word, e, n as i32)).unwrap();
                assert!(rel(l, want) < 1e-9, "{} about e{e}, n = {n}: {l} vs {want}", entry.word);
                compared += 1;
            }
        }
    }
    assert!(compared >= 100);
}

#[test]
fn orbit_argmin_is_minimal_with_tie_rule() {
    let (g, x) = presets::symmetric_genus2();
    let h = build_holonomy(&g, &x).unwrap();
    let y = h.y_words[0].clone().unwrap();
    let o = twist_orbit(&g, &x, &y, 0, 4).unwrap();
    assert!(!o.disjoint);
    // The sweep is symmetric about n = 1.
    assert_eq!(o.argmin, 1);
    assert!(o.sweep.iter().all(|&(_, l)| l >= o.min_length));
    assert!(rel(o.sweep[4].1, o.sweep[6].1) < 1e-12);
    // Half a turn more and n = 0, 1 tie; the smaller |n| wins.
    let half = twist_orbit(&g, &x.twisted(0, 0.5), &y, 0, 4).unwrap();
    assert!(rel(half.sweep[4].1, half.sweep[5].1) < 1e-12);
    assert_eq!(half.argmin, 0);
    let d = twist_orbit(&g, &x, &h.x_words[1], 0, 4).unwrap();
    assert!(d.disjoint);
    assert_eq!(d.argmin, 0);
    assert!(twist_orbit(&g, &x, &y, 0, 0).is_err());
    assert!(twist_orbit(&g, &x, &y, 7, 2).is_err());
}

#[test]
fn descent_never_increases_and_is_locally_optimal() {
    let mut r = rng(8);
    for g in genus2_graphs() {
        let mut x = random_coords(&mut r, 3, 0.9, 1.5);
        x.twists = vec![2.3, -1.6, 0.7];
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 9.0, &EnumConfig::default()).unwrap();
        for entry in t.entries.iter().filter(|e| e.word.crossings() > 0).take(5) {
            let edges: Vec<usize> = (0..3).filter(|&e| entry.crossings[e] > 0).collect();
            let d = minimize_over_twists(&g, &x, &entry.word, &edges, 6).unwrap();
            assert!(d.length <= d.initial_length);
            assert!(rel(d.initial_length, entry.length) < 1e-9);
            let mut at = x.clone();
            for (&e, &o) in edges.iter().zip(&d.offsets) {
                at.twists[e] += o as f64;
            }
            for &e in &edges {
                for s in [-1.0, 1.0] {
                    let l = word_length(&build_holonomy(&g, &at.twisted(e, s)).unwrap(), &entry.word).unwrap();
                    let boundary = d.window_exhausted;
                    assert!(boundary || l >= d.length * (1.0 - 1e-12), "{} improves along e{e}", entry.word);
                }
            }
        }
    }
    let (g, x) = presets::symmetric_genus2();
    assert!(minimize_over_twists(&g, &x, &build_holonomy(&g, &x).unwrap().x_words[0], &[1, 1], 3).is_err());
}

#[test]
fn pinching_one_curve_bounds_the_length_ratio() {
    let g = presets::theta_graph();
    let mut rs = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let x = FNCoordinates::new(vec![eps, 1.5, 1.5], vec![0.0, 0.1, -0.2]);
        let y = auxiliary_surface(&g, &x);
        assert_eq!(y.lengths, vec![A1, 1.5, 1.5]);
        let rep = check_auxiliary_bounds(&g, &x, &y, 12.0).unwrap();
        assert!(rel(rep.sys_y, A1) < 1e-8, "sys(Y) = {}", rep.sys_y);
        assert_eq!(rep.sys_x, eps);
        assert!(rep.max_disjoint_ratio <= 1.0 + 1e-9);
        assert!(rep.crossing_rows().count() > 0);
        for row in &rep.rows {
            assert!(rel(row.ratio, row.length_before / row.length_after) < 1e-15);
        }
        rs.push(rep.r);
    }
    // The ratio over |log sys(X)| stays bounded as the curve is pinched.
    assert!(rs.iter().all(|&r| r > 0.1 && r < 1.0), "{rs:?}");
    assert!(rs[2] <= rs[0]);
}

#[test]
fn lengthening_rejects_shortening() {
    let (g, x) = presets::symmetric_genus2();
    let y = lengthen_curves(&g, &x, &[0, 2], 3.0).unwrap();
    assert_eq!(y.lengths, vec![3.0, 2.0, 3.0]);
    assert!(lengthen_curves(&g, &x, &[1], 1.0).is_err());
    assert!(lengthen_curves(&g, &x, &[5], 3.0).is_err());
    assert!(check_auxiliary_bounds(&g, &x, &x, 5.0).is_err());
}
