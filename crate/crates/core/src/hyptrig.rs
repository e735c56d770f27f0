//! Closed-form hyperbolic trigonometry for collars, pants and translation lengths.

use crate::error::{Error, Result};

/// Fixed threshold a1 = e^{-sqrt 2}.
pub const A1: f64 = 0.243_116_734_434_214_16;
/// 2 arcsinh(1): the collar regime threshold.
pub const TWO_ARCSINH1: f64 = 1.762_747_174_039_086;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub a1: f64,
    pub two_arcsinh1: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { a1: A1, two_arcsinh1: TWO_ARCSINH1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarData {
    pub curve_length: f64,
    pub half_width: f64,
    pub boundary_circle_length: f64,
}

impl CollarData {
    pub fn new(l: f64) -> Result<Self> {
        let w = collar_half_width(l)?;
        Ok(CollarData { curve_length: l, half_width: w, boundary_circle_length: l * w.cosh() })
    }
}

fn check_pos(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

/// arccosh with the cancellation-free form near 1.
pub fn acosh_stable(x: f64) -> f64 {
    let u = x - 1.0;
    if u < 0.0 {
        return 0.0;
    }
    (u + (2.0 * u + u * u).sqrt()).ln_1p()
}

pub fn collar_half_width(l: f64) -> Result<f64> {
    check_pos("curve length", l)?;
    Ok((1.0 / (l / 2.0).sinh()).asinh())
}

pub fn collar_circle_length(l: f64, rho: f64) -> Result<f64> {
    let w = collar_half_width(l)?;
    if !(rho >= 0.0) || rho > w * (1.0 + 1e-15) {
        return Err(Error::Domain(format!("rho = {rho} outside [0, {w}]")));
    }
    Ok(l * rho.cosh())
}

/// Length of the common perpendicular between boundaries 1 and 2 of a pair of pants.
pub fn perp_distinct(l1: f64, l2: f64, l3: f64) -> Result<f64> {
    check_pos("l1", l1)?;
    check_pos("l2", l2)?;
    check_pos("l3", l3)?;
    let (h1, h2, h3) = (l1 / 2.0, l2 / 2.0, l3 / 2.0);
    let x = (h3.cosh() + h1.cosh() * h2.cosh()) / (h1.sinh() * h2.sinh());
    Ok(acosh_stable(x))
}

/// Length of the simple perpendicular from a boundary to itself.
pub fn perp_same(l1: f64, l3: f64, eta13: f64) -> Result<f64> {
    check_pos("l1", l1)?;
    check_pos("l3", l3)?;
    check_pos("eta13", eta13)?;
    let x = eta13.sinh() * (l3 / 2.0).sinh();
    if x < 1.0 - 1e-14 {
        return Err(Error::Domain(format!("sinh(eta13) sinh(l3/2) = {x} < 1")));
    }
    Ok(2.0 * acosh_stable(x.max(1.0)))
}

/// Distance between points at signed offsets rho1, rho2 from a geodesic whose feet are eta apart.
pub fn arc_with_feet(rho1: f64, rho2: f64, eta: f64) -> Result<f64> {
    check_pos("eta", eta)?;
    let x = rho1.cosh() * rho2.cosh() * eta.cosh() - rho1.sinh() * rho2.sinh();
    debug_assert!(x >= 1.0 - 1e-12);
    Ok(acosh_stable(x))
}

/// Model length 2|log l| + m l of a geodesic crossing a thin collar with m twists.
pub fn thin_crossing_model(l_gamma: f64, m: u32) -> Result<f64> {
    check_pos("l_gamma", l_gamma)?;
    if l_gamma > TWO_ARCSINH1 {
        return Err(Error::Domain(format!("{l_gamma} exceeds 2 arcsinh 1")));
    }
    Ok(2.0 * l_gamma.ln().abs() + m as f64 * l_gamma)
}

pub fn trace_to_length(tr: f64) -> Result<f64> {
    let a = tr.abs();
    if !a.is_finite() || a <= 2.0 {
        return Err(Error::NotHyperbolic(a));
    }
    Ok(2.0 * acosh_stable(a / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn constants_match_closed_forms() {
        assert!(rel(A1, (-(2f64).sqrt()).exp()) < 1e-15);
        assert!(rel(TWO_ARCSINH1, 2.0 * 1f64.asinh()) < 1e-15);
        assert!(A1 < 1f64.asinh());
    }

    #[test]
    fn collar_width_at_regime_threshold() {
        let w = collar_half_width(TWO_ARCSINH1).unwrap();
        assert!(rel(w, 1f64.asinh()) < 1e-14);
    }

    #[test]
    fn collar_width_decreases() {
        let ws: Vec<f64> = (1..=10).map(|l| collar_half_width(l as f64).unwrap()).collect();
        assert!(ws.windows(2).all(|p| p[1] < p[0]));
        assert!(ws[9] < 0.014);
    }

    #[test]
    fn domain_errors() {
        assert!(collar_half_width(0.0).is_err());
        assert!(collar_half_width(-1.0).is_err());
        assert!(collar_half_width(f64::NAN).is_err());
        assert!(collar_circle_length(1.0, 10.0).is_err());
        assert!(thin_crossing_model(2.0, 0).is_err());
        assert!(perp_same(1.0, 0.1, 0.1).is_err());
        assert!(matches!(trace_to_length(2.0), Err(Error::NotHyperbolic(_))));
        assert!(matches!(trace_to_length(-2.0), Err(Error::NotHyperbolic(_))));
    }

    #[test]
    fn core_circle_is_curve() {
        assert_eq!(collar_circle_length(0.7, 0.0).unwrap(), 0.7);
    }

    #[test]
    fn thin_model_arithmetic() {
        assert!(rel(thin_crossing_model((-3f64).exp(), 0).unwrap(), 6.0) < 1e-14);
        assert!(rel(thin_crossing_model(0.1, 5).unwrap(), 2.0 * 10f64.ln() + 0.5) < 1e-14);
    }

    #[test]
    fn trace_length_inverse() {
        for l in [0.5, 1.0, 5.0] {
            assert!(rel(trace_to_length(2.0 * (l / 2.0_f64).cosh()).unwrap(), l) < 1e-12);
        }
    }

    #[test]
    fn zero_offsets_give_eta() {
        assert_eq!(arc_with_feet(0.0, 0.0, 1.3).unwrap(), 1.3);
    }

    #[test]
    fn opposite_offsets_are_longer() {
        for r in [0.5, 1.0, 2.0] {
            for eta in [0.5, 1.0, 2.0] {
                assert!(arc_with_feet(r, -r, eta).unwrap() >= arc_with_feet(r, r, eta).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_self_perpendicular() {
        let l3 = 1.0;
        let eta = (1.0 / (l3 / 2.0_f64).sinh()).asinh();
        assert!(perp_same(0.3, l3, eta).unwrap() < 1e-6);
    }

    #[test]
    fn perp_same_increases_in_eta() {
        let v: Vec<f64> = (0..20).map(|k| perp_same(1.0, 1.0, 2.0 + 0.1 * k as f64).unwrap()).collect();
        assert!(v.windows(2).all(|p| p[1] > p[0]));
    }
}
