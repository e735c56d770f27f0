//! Orientation-preserving isometries of the upper half-plane as unit-determinant matrices.
//!
//! Boundary points live in R ∪ {∞}; ∞ is `f64::INFINITY`. Crossing signs follow one
//! convention everywhere: `Cross(+1)` when the second axis crosses the first from its
//! left side to its right side.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyptrig::trace_to_length;

pub const DET_TOL: f64 = 1e-9;
pub const ENDPOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a unit-determinant matrix (adjugate).
    pub fn inv(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn norm2(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Rescale so that det = 1 (det must be positive).
    pub fn normalized(&self) -> Mat2 {
        let s = 1.0 / self.det().sqrt();
        Mat2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn pow(&self, n: i64) -> Mat2 {
        let base = if n < 0 { self.inv() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::IDENTITY;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_boundary(&self, x: f64) -> f64 {
        if x.is_infinite() {
            if self.c == 0.0 {
                f64::INFINITY
            } else {
                self.a / self.c
            }
        } else {
            let den = self.c * x + self.d;
            if den == 0.0 {
                f64::INFINITY
            } else {
                (self.a * x + self.b) / den
            }
        }
    }

    /// Hyperbolic distance from i to self·i.
    pub fn displacement(&self) -> f64 {
        let x = 0.5 * self.norm2() / self.det();
        crate::hyptrig::acosh_stable(x.max(1.0))
    }

    pub fn approx_eq(&self, o: &Mat2, tol: f64) -> bool {
        (self.a - o.a).abs() <= tol
            && (self.b - o.b).abs() <= tol
            && (self.c - o.c).abs() <= tol
            && (self.d - o.d).abs() <= tol
    }

    /// Equality in PSL(2,R).
    pub fn approx_eq_projective(&self, o: &Mat2, tol: f64) -> bool {
        self.approx_eq(o, tol) || self.approx_eq(&o.neg(), tol)
    }
}

/// Translation by `d` along the imaginary axis, upward.
pub fn translation(d: f64) -> Mat2 {
    let e = (d / 2.0).exp();
    Mat2::new(e, 0.0, 0.0, 1.0 / e)
}

/// Counterclockwise rotation by `theta` about i.
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::new(c, s, -s, c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: Mat2,
}

impl Isometry {
    pub fn new(m: Mat2) -> Result<Self> {
        if (m.det() - 1.0).abs() > DET_TOL * m.norm2().max(1.0) {
            return Err(Error::Domain(format!("determinant {} is not 1", m.det())));
        }
        Ok(Isometry { m })
    }

    pub fn identity() -> Self {
        Isometry { m: Mat2::IDENTITY }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { m: self.m.inv() }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    pub fn translation_length(&self) -> Result<f64> {
        trace_to_length(self.trace())
    }

    pub fn axis(&self) -> Result<Axis> {
        axis_of(&self.m)
    }
}

/// Matrix product with the determinant renormalized to 1.
pub fn compose(a: &Isometry, b: &Isometry) -> Isometry {
    Isometry { m: a.m.mul(&b.m).normalized() }
}

/// Oriented geodesic from the repelling to the attracting fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub from: f64,
    pub to: f64,
}

impl Axis {
    pub fn new(from: f64, to: f64) -> Self {
        Axis { from, to }
    }

    pub fn reversed(&self) -> Axis {
        Axis { from: self.to, to: self.from }
    }

    pub fn image(&self, g: &Mat2) -> Axis {
        Axis { from: g.apply_boundary(self.from), to: g.apply_boundary(self.to) }
    }

    /// Isometry sending this axis to the imaginary axis, oriented upward.
    pub fn chart(&self) -> Mat2 {
        let (x1, x2) = (self.from, self.to);
        let m = if x2.is_infinite() {
            Mat2::new(1.0, -x1, 0.0, 1.0)
        } else if x1.is_infinite() {
            Mat2::new(0.0, 1.0, -1.0, x2)
        } else {
            let m = Mat2::new(1.0, -x1, 1.0, -x2);
            if m.det() > 0.0 {
                m
            } else {
                Mat2::new(-1.0, x1, 1.0, -x2)
            }
        };
        m.normalized()
    }
}

fn angle(x: f64) -> f64 {
    if x.is_infinite() {
        PI
    } else {
        2.0 * x.atan()
    }
}

fn ang_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn in_ccw_arc(x: f64, from: f64, to: f64) -> bool {
    (x - from).rem_euclid(2.0 * PI) < (to - from).rem_euclid(2.0 * PI)
}

pub fn axis_of(m: &Mat2) -> Result<Axis> {
    let tr = m.trace();
    if tr.abs() <= 2.0 {
        return Err(Error::NotHyperbolic(tr.abs()));
    }
    // Fixed points of z -> (az+b)/(cz+d) solve c z^2 + (d-a) z - b = 0.
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    let disc = (tr * tr - 4.0).sqrt();
    let (p, q) = if c.abs() < 1e-300 {
        // Upper triangular: fixed points ∞ and b/(d-a).
        (f64::INFINITY, b / (d - a))
    } else {
        let s = if tr > 0.0 { 1.0 } else { -1.0 };
        // Roots (a - d ± disc)/(2c), computed without cancellation.
        let r1 = ((a - d) + s * disc) / (2.0 * c);
        let r2 = if r1 != 0.0 { -b / (c * r1) } else { ((a - d) - s * disc) / (2.0 * c) };
        (r1, r2)
    };
    // Attracting fixed point has |derivative| < 1, i.e. |cz + d| > 1.
    let deriv = |z: f64| -> f64 {
        if z.is_infinite() {
            // Derivative at ∞ in the chart w = 1/z is d^2 (for c = 0).
            d * d
        } else {
            let den = c * z + d;
            1.0 / (den * den)
        }
    };
    if deriv(p) < deriv(q) {
        Ok(Axis { from: q, to: p })
    } else {
        Ok(Axis { from: p, to: q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Disjoint,
    Cross(i32),
    Shared,
}

/// Linking test with orientation sign; +1 when `b` crosses `a` from left to right.
pub fn axes_cross(a: &Axis, b: &Axis) -> Result<Crossing> {
    let (a1, a2, b1, b2) = (angle(a.from), angle(a.to), angle(b.from), angle(b.to));
    let close = |x: f64, y: f64| ang_dist(x, y) < ENDPOINT_TOL;
    let n_close = [close(b1, a1) || close(b1, a2), close(b2, a1) || close(b2, a2)];
    if n_close[0] && n_close[1] {
        return Ok(Crossing::Shared);
    }
    if n_close[0] || n_close[1] {
        return Err(Error::NumericallyAmbiguous(format!("axes {a:?} and {b:?} nearly share an endpoint")));
    }
    // Left of a is the arc from a.to counterclockwise to a.from.
    let b1_left = in_ccw_arc(b1, a2, a1);
    let b2_left = in_ccw_arc(b2, a2, a1);
    Ok(match (b1_left, b2_left) {
        (true, false) => Crossing::Cross(1),
        (false, true) => Crossing::Cross(-1),
        _ => Crossing::Disjoint,
    })
}

/// For linked lines `a`, `b`, the arc-length parameter along `a` (in the chart of `a`)
/// of their intersection point.
pub fn crossing_parameter(chart: &Mat2, b: &Axis) -> Option<f64> {
    let p = chart.apply_boundary(b.from);
    let q = chart.apply_boundary(b.to);
    if !p.is_finite() || !q.is_finite() || p * q >= 0.0 {
        return None;
    }
    Some(0.5 * (-p * q).ln())
}

/// Point on the imaginary axis at parameter t, mapped back through the inverse chart.
pub fn point_on_axis(chart: &Mat2, t: f64) -> Complex64 {
    chart.inv().apply(Complex64::new(0.0, t.exp()))
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn dist(z: Complex64, w: Complex64) -> f64 {
    let x = 1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im);
    crate::hyptrig::acosh_stable(x)
}
