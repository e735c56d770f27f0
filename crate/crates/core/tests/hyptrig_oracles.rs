//! Closed forms against values frozen from a 40-digit evaluation.

use kform_core::hyptrig::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn collar_width_at_one_tenth() {
    let w = collar_half_width(0.1).unwrap();
    assert!(rel(w, 3.689_087_757_070_663_4) < 1e-12);
    assert!(w >= 0.1f64.ln().abs());
}

#[test]
fn collar_boundary_circles() {
    let l = TWO_ARCSINH1;
    let c = collar_circle_length(l, collar_half_width(l).unwrap()).unwrap();
    assert!(rel(c, 2.492_900_960_560_922) < 1e-12);
    assert!(c <= 2.0 * 2f64.sqrt());
    let w = collar_half_width(0.01).unwrap();
    let c = collar_circle_length(0.01, w).unwrap();
    assert!(rel(c, 2.000_016_666_638_889) < 1e-12);
    assert!(c <= 2.0 * (1.0 + (0.005f64).sinh().powi(2)).sqrt());
    assert!(collar_circle_length(0.01, w * 1.01).is_err());
}

#[test]
fn perpendicular_between_distinct_boundaries() {
    let l = 2.0 * 2f64.acosh();
    assert!(rel(perp_distinct(l, l, l).unwrap(), 1.316_957_896_924_816_7) < 1e-12);
    let p = perp_distinct(1e-3, 1.0, 1.0).unwrap();
    assert!(rel(p, 9.759_133_671_063_857) < 1e-10);
    assert!(p >= 1e-3f64.ln().abs());
}

#[test]
fn perpendicular_on_a_single_boundary() {
    let l = 2.0 * 2f64.acosh();
    let eta = perp_distinct(l, l, l).unwrap();
    let v = perp_same(l, l, eta).unwrap();
    assert!(rel(v, 3.525_494_348_078_172) < 1e-12);
    // Expanded form of cosh^2 of half the perpendicular on an equal-boundary pants.
    let c = (l / 2.0).cosh();
    let expanded = (3.0 * c * c + 2.0 * c.powi(3) - 1.0) / (l / 2.0).sinh().powi(2);
    assert!(rel((v / 2.0).cosh().powi(2), expanded) < 1e-12);
    assert!(rel(expanded, 9.0) < 1e-12);
}

#[test]
fn arc_between_offset_feet() {
    assert!(rel(arc_with_feet(1.0, 1.0, 1.0).unwrap(), 1.471_720_882_725_903_7) < 1e-12);
    for r in [0.5, 1.0, 2.0] {
        for eta in [0.5, 1.0, 2.0] {
            assert!(arc_with_feet(r, -r, eta).unwrap() >= arc_with_feet(r, r, eta).unwrap());
        }
    }
}

#[test]
fn translation_length_from_trace() {
    assert!(rel(trace_to_length(-3.0).unwrap(), 1.924_847_300_238_413_8) < 1e-12);
    assert!(trace_to_length(2.0).is_err());
    assert!(trace_to_length(-2.0).is_err());
    for l in [0.5, 1.0, 5.0] {
        assert!(rel(trace_to_length(2.0 * (l / 2.0f64).cosh()).unwrap(), l) < 1e-12);
    }
}

#[test]
fn thin_model_regime() {
    assert!(thin_crossing_model(2.0, 1).is_err());
    assert!(rel(thin_crossing_model(0.1, 5).unwrap(), 5.105_170_185_988_091) < 1e-12);
}

proptest! {
    #[test]
    fn width_dominates_log_below_a1(e in -30.0f64..0.0) {
        let x = A1 * e.exp();
        prop_assume!(x < A1);
        let w = collar_half_width(x).unwrap();
        prop_assert!(w >= x.ln().abs());
        prop_assert!(x.ln().abs() >= 2f64.sqrt());
    }

    #[test]
    fn boundary_circle_bound(l in 1e-4f64..10.0) {
        let c = collar_circle_length(l, collar_half_width(l).unwrap()).unwrap();
        prop_assert!(c <= 2.0 * (1.0 + (l / 2.0).sinh().powi(2)).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn perp_distinct_symmetric_and_decreasing(a in 0.05f64..5.0, b in 0.05f64..5.0, c in 0.05f64..5.0) {
        let p = perp_distinct(a, b, c).unwrap();
        prop_assert!(rel(p, perp_distinct(b, a, c).unwrap()) < 1e-12);
        prop_assert!(perp_distinct(a * 1.1, b, c).unwrap() < p);
        prop_assert!(perp_distinct(a, b * 1.1, c).unwrap() < p);
    }

    #[test]
    fn trace_round_trip(l in 1e-3f64..20.0) {
        prop_assert!(rel(trace_to_length(2.0 * (l / 2.0).cosh()).unwrap(), l) < 1e-12);
    }
}
