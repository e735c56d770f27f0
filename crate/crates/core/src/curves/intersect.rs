//! Signed crossings of closed geodesics.
//!
//! A geodesic that crosses pants curves is cut into chords, one per visit to a pants.
//! In the local coordinates of a pants P the lift of P is tiled by translates of a
//! fundamental octagon F (a hexagon and its mirror image across one seam) under the
//! free group generated by two boundary elements; the dual graph of that tiling is a
//! tree. For each chord of one curve we collect the lines of the other curve that meet
//! it: such a line meets the chord inside some tile g F and has a chord through some
//! tile f F of its own base lift, so the translating element is g f^-1 with g, f taken
//! from tiles along the two chords. Crossings are counted over a half-open parameter
//! window so points on pants curves are counted once.
//!
//! Pants curves themselves are handled combinatorially: a reduced word meets the
//! pants curve of edge e once for each letter crossing e.

use std::collections::HashSet;

use num_complex::Complex64;

use super::word::{CurveWord, Letter};
use crate::error::{Error, Result};
use crate::moebius::{axis_of, point_on_axis, Axis, Mat2};
use crate::surface::{Holonomy, PantsFrames};

const PARAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedCrossing {
    /// +1 when the second curve crosses the first from left to right.
    pub sign: i32,
    /// Index of the chord of the first curve containing the point (0 for pants curves).
    pub visit: usize,
    /// Position along that chord in its axis chart.
    pub param: f64,
}

/// Boundary geodesic of a slot in local coordinates.
fn boundary_line(pf: &PantsFrames, s: usize) -> Axis {
    Axis::new(0.0, f64::INFINITY).image(&pf.frames[s])
}

/// Unit-circle geodesic in the frame at the start of side s: the seam ending there.
fn seam_line(pf: &PantsFrames, s: usize) -> Axis {
    Axis::new(-1.0, 1.0).image(&pf.frames[s])
}

/// Which side of a line a point lies on, as the sign of its real part in the chart.
fn side(chart: &Mat2, z: Complex64) -> f64 {
    let w = chart.apply(z);
    w.re / w.norm()
}

/// Tiling of the lift of one pants by the fundamental octagon.
struct Tiling {
    /// h0, h0^-1, h1, h1^-1; generator i has inverse i ^ 1.
    gens: [Mat2; 4],
    /// For each octagon side not on a boundary: its chart, the sign of the interior,
    /// and the generator g with g F adjacent across it.
    sides: Vec<(Mat2, f64, usize)>,
}

impl Tiling {
    fn new(pf: &PantsFrames) -> Tiling {
        let gens = [pf.loops[0], pf.loops[0].inv(), pf.loops[1], pf.loops[1].inv()];
        let mirror = pf.frames[1];
        let mirror_inv = mirror.inv();
        let reflect = |a: &Axis| -> Axis {
            let r = |x: f64| {
                let y = mirror_inv.apply_boundary(x);
                let y = if y == 0.0 { f64::INFINITY } else if y.is_infinite() { 0.0 } else { 1.0 / y };
                mirror.apply_boundary(y)
            };
            Axis::new(r(a.from), r(a.to))
        };
        let inside = pf.frames[1].apply(Complex64::new(0.0, 1.0));
        let mut sides = Vec::new();
        // Seam (2,0) is paired by h0, seam (1,2) by h1.
        for (seam_slot, g) in [(0usize, 0usize), (2, 2)] {
            let a = seam_line(pf, seam_slot);
            let b = reflect(&a);
            let err = |m: &Mat2| line_distance(&b.image(m), &a);
            // x maps the mirrored copy onto the original, so x F lies across the original.
            let x = if err(&gens[g]) <= err(&gens[g ^ 1]) { g } else { g ^ 1 };
            for (line, gen) in [(a, x), (b, x ^ 1)] {
                let chart = line.chart();
                sides.push((chart, side(&chart, inside).signum(), gen));
            }
        }
        Tiling { gens, sides }
    }

    /// Reduced word of the tile containing z.
    fn tile_of(&self, z: Complex64) -> Vec<u8> {
        let mut word = Vec::new();
        let mut z = z;
        for _ in 0..100_000 {
            let mut moved = false;
            for &(chart, sign, g) in &self.sides {
                if side(&chart, z) * sign < -1e-12 {
                    z = self.gens[g ^ 1].apply(z);
                    word.push(g as u8);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        word
    }

    fn matrix(&self, w: &[u8]) -> Mat2 {
        w.iter().fold(Mat2::IDENTITY, |m, &g| m.mul(&self.gens[g as usize]))
    }

    /// Tiles along the tree path between two tiles, with all their neighbours.
    fn tiles_between(&self, u: &[u8], w: &[u8]) -> Vec<Vec<u8>> {
        let c = u.iter().zip(w).take_while(|(a, b)| a == b).count();
        let mut path: Vec<Vec<u8>> = Vec::new();
        for k in (c..=u.len()).rev() {
            path.push(u[..k].to_vec());
        }
        for k in c + 1..=w.len() {
            path.push(w[..k].to_vec());
        }
        let mut out: HashSet<Vec<u8>> = HashSet::new();
        for t in path {
            for g in 0..4u8 {
                out.insert(push_reduced(&t, g));
            }
            out.insert(t);
        }
        let mut v: Vec<_> = out.into_iter().collect();
        v.sort();
        v
    }
}

fn push_reduced(w: &[u8], g: u8) -> Vec<u8> {
    let mut v = w.to_vec();
    if v.last() == Some(&(g ^ 1)) {
        v.pop();
    } else {
        v.push(g);
    }
    v
}

fn inverse_word(w: &[u8]) -> Vec<u8> {
    w.iter().rev().map(|&g| g ^ 1).collect()
}

fn line_distance(a: &Axis, b: &Axis) -> f64 {
    let d = |x: f64, y: f64| (2.0 * x.atan() - 2.0 * y.atan()).abs();
    let same = d(a.from, b.from) + d(a.to, b.to);
    let swapped = d(a.from, b.to) + d(a.to, b.from);
    same.min(swapped)
}

/// One passage of a geodesic through the lift of a pants, in that pants' coordinates.
#[derive(Debug, Clone)]
struct Chord {
    pants: usize,
    axis: Axis,
    chart: Mat2,
    t_in: f64,
    t_out: f64,
    /// Translation length when the chord is a full period of a curve inside one pants.
    period: Option<f64>,
    tiles: Vec<Vec<u8>>,
}

fn chords(h: &Holonomy, tilings: &[Tiling], w: &CurveWord) -> Result<Vec<Chord>> {
    let g = &h.graph;
    let n = w.letters.len();
    let cross_idx: Vec<usize> = (0..n).filter(|&i| matches!(w.letters[i], Letter::Cross { .. })).collect();
    if cross_idx.is_empty() {
        let p = w.check_closed(g)?;
        let m = h.word_matrix_local(w, 0);
        let axis = axis_of(&m)?;
        let chart = axis.chart();
        let len = 2.0 * crate::hyptrig::acosh_stable(m.trace().abs() / 2.0);
        let t0 = chart.apply(Complex64::new(0.0, 1.0)).norm().ln();
        let tl = &tilings[p];
        let a = tl.tile_of(point_on_axis(&chart, t0));
        let b = tl.tile_of(point_on_axis(&chart, t0 + len));
        let tiles = tl.tiles_between(&a, &b);
        return Ok(vec![Chord { pants: p, axis, chart, t_in: t0, t_out: t0 + len, period: Some(len), tiles }]);
    }
    let mut out = Vec::with_capacity(cross_idx.len());
    for (k, &i) in cross_idx.iter().enumerate() {
        let (_, (p, t)) = w.letters[i].frames(g);
        let j = cross_idx[(k + 1) % cross_idx.len()];
        let start = (i + 1) % n;
        let m = h.word_matrix_local(w, start);
        let axis = axis_of(&m)?;
        let chart = axis.chart();
        let pf = &h.pants[p];
        let mut run = Mat2::IDENTITY;
        let mut idx = start;
        while idx != j {
            run = run.mul(&h.letter_matrix(w.letters[idx]));
            idx = (idx + 1) % n;
        }
        let ((_, s), _) = w.letters[j].frames(g);
        let entry = boundary_line(pf, t);
        let exit = boundary_line(pf, s).image(&run);
        let param = |l: &Axis| {
            crate::moebius::crossing_parameter(&chart, l)
                .ok_or_else(|| Error::NumericallyAmbiguous(format!("chord {k} of {w} misses a wall")))
        };
        let (t_in, t_out) = (param(&entry)?, param(&exit)?);
        if t_out <= t_in {
            return Err(Error::NumericallyAmbiguous(format!("chord {k} of {w} runs backwards")));
        }
        let tl = &tilings[p];
        let a = tl.tile_of(point_on_axis(&chart, t_in));
        let b = tl.tile_of(point_on_axis(&chart, t_out));
        let tiles = tl.tiles_between(&a, &b);
        out.push(Chord { pants: p, axis, chart, t_in, t_out, period: None, tiles });
    }
    Ok(out)
}

/// Single boundary-power word: (edge, signed multiplicity relative to endpoint A).
fn as_pants_curve(h: &Holonomy, w: &CurveWord) -> Option<(usize, i64)> {
    if w.letters.len() != 1 {
        return None;
    }
    match w.letters[0] {
        Letter::Loop { pants, slot, pow } => {
            let (p, s) = (pants as usize, slot as usize);
            Some((h.graph.pants[p][s], pow as i64 * h.graph.endpoint_sign(p, s)))
        }
        Letter::Cross { .. } => None,
    }
}

fn pants_curve_crossings(e: usize, mult: i64, v: &CurveWord) -> Vec<SignedCrossing> {
    let mut out = Vec::new();
    for l in &v.letters {
        if let Letter::Cross { edge, fwd } = *l {
            if edge as usize == e {
                // Leaving the A side crosses from the left of x_e to its right.
                let s = if fwd { 1 } else { -1 } * mult.signum() as i32;
                for _ in 0..mult.unsigned_abs() {
                    out.push(SignedCrossing { sign: s, visit: 0, param: 0.0 });
                }
            }
        }
    }
    out
}

/// Crossings of the geodesics of `u` and `v`; the sum of signs is the algebraic
/// intersection number Int(u, v).
pub fn geometric_int_signed(h: &Holonomy, u: &CurveWord, v: &CurveWord) -> Result<Vec<SignedCrossing>> {
    let g = &h.graph;
    u.check_closed(g)?;
    v.check_closed(g)?;
    let u = u.reduced(g);
    let v = v.reduced(g);
    match (as_pants_curve(h, &u), as_pants_curve(h, &v)) {
        (Some((e, _)), Some((f, _))) if e == f => return Err(Error::SharedGeodesic),
        (Some(_), Some(_)) => return Ok(Vec::new()),
        (Some((e, m)), None) => return Ok(pants_curve_crossings(e, m, &v)),
        (None, Some((f, m))) => {
            let mut c = pants_curve_crossings(f, m, &u);
            for x in &mut c {
                x.sign = -x.sign;
            }
            return Ok(c);
        }
        (None, None) => {}
    }
    let tilings: Vec<Tiling> = h.pants.iter().map(Tiling::new).collect();
    let cu = chords(h, &tilings, &u)?;
    let cv = chords(h, &tilings, &v)?;
    count_crossings(&tilings, &cu, &cv, false)
}

/// Transverse double points of the geodesic of `w`.
pub fn self_int_count(h: &Holonomy, w: &CurveWord) -> Result<usize> {
    let g = &h.graph;
    w.check_closed(g)?;
    let w = w.reduced(g);
    if as_pants_curve(h, &w).is_some() {
        return Ok(0);
    }
    let tilings: Vec<Tiling> = h.pants.iter().map(Tiling::new).collect();
    let c = chords(h, &tilings, &w)?;
    let n = count_crossings(&tilings, &c, &c, true)?.len();
    Ok(n / 2)
}

fn count_crossings(tilings: &[Tiling], cu: &[Chord], cv: &[Chord], same: bool) -> Result<Vec<SignedCrossing>> {
    let mut out = Vec::new();
    for (k, a) in cu.iter().enumerate() {
        let tl = &tilings[a.pants];
        for b in cv.iter().filter(|b| b.pants == a.pants) {
            let mut seen: HashSet<Vec<u8>> = HashSet::new();
            for gt in &a.tiles {
                for ft in &b.tiles {
                    let mut hw = gt.clone();
                    for x in inverse_word(ft) {
                        hw = push_reduced(&hw, x);
                    }
                    if !seen.insert(hw.clone()) {
                        continue;
                    }
                    let hm = tl.matrix(&hw);
                    let line = b.axis.image(&hm);
                    let p = a.chart.apply_boundary(line.from);
                    let q = a.chart.apply_boundary(line.to);
                    let near0 = |x: f64| x.abs() < 1e-8;
                    let near_inf = |x: f64| !x.is_finite() || x.abs() > 1e8;
                    if (near0(p) && near_inf(q)) || (near_inf(p) && near0(q)) {
                        if same {
                            continue;
                        }
                        return Err(Error::SharedGeodesic);
                    }
                    if !(p.is_finite() && q.is_finite()) || p * q >= 0.0 {
                        continue;
                    }
                    let t = 0.5 * (-p * q).ln();
                    if t < a.t_in - PARAM_TOL || t >= a.t_out - PARAM_TOL {
                        continue;
                    }
                    if let Some(len) = b.period {
                        // The line is counted once per period of its own curve.
                        let x = point_on_axis(&a.chart, t);
                        let y = hm.inv().apply(x);
                        let s = b.chart.apply(y).norm().ln();
                        if s < b.t_in - PARAM_TOL || s >= b.t_in + len - PARAM_TOL {
                            continue;
                        }
                    }
                    out.push(SignedCrossing { sign: if p < 0.0 { 1 } else { -1 }, visit: k, param: t });
                }
            }
        }
    }
    Ok(out)
}

/// Number of intersection points, ignoring signs.
pub fn geometric_int(h: &Holonomy, u: &CurveWord, v: &CurveWord) -> Result<usize> {
    Ok(geometric_int_signed(h, u, v)?.len())
}
