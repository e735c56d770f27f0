//! Deformations in Fenchel-Nielsen coordinates: raising short curves to the
//! auxiliary threshold, lengthening pants curves, and Dehn-twist orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{build_table, CurveWord, EnumConfig};
use crate::error::{Error, Result};
use crate::hyptrig::{thin_crossing_model, A1, TWO_ARCSINH1};
use crate::surface::{build_holonomy, word_length, FNCoordinates, Holonomy, PantsGraph};

/// Slack on the "disjoint curves do not get longer on X" comparison.
pub const TIE_TOL: f64 = 1e-12;
pub const DISJOINT_TOL: f64 = 1e-9;

/// Every pants curve shorter than a1 is raised to a1; everything else is kept.
pub fn auxiliary_surface(_g: &PantsGraph, x: &FNCoordinates) -> FNCoordinates {
    let mut y = x.clone();
    for l in y.lengths.iter_mut() {
        if *l < A1 {
            *l = A1;
        }
    }
    y
}

/// Pants curves of `x` shorter than a1.
pub fn short_edges(x: &FNCoordinates) -> Vec<usize> {
    (0..x.lengths.len()).filter(|&e| x.lengths[e] < A1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    DisjointFromShort,
    CrossingShort,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformRow {
    pub id: usize,
    pub word: CurveWord,
    pub length_before: f64,
    pub length_after: f64,
    pub ratio: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationReport {
    pub rows: Vec<DeformRow>,
    /// Systole of X (shortest pants curve below a1).
    pub sys_x: f64,
    pub sys_y: f64,
    /// max over crossing curves of (l_X / l_Y) / |log sys X|; zero when none were found.
    pub r: f64,
    pub max_disjoint_ratio: f64,
}

impl DeformationReport {
    pub fn crossing_rows(&self) -> impl Iterator<Item = &DeformRow> {
        self.rows.iter().filter(|r| r.regime == Regime::CrossingShort)
    }
}

/// Compares lengths on X and on the auxiliary surface Y for every simple curve of
/// length at most `cutoff` on either surface (one orientation each).
pub fn check_auxiliary_bounds(
    g: &PantsGraph,
    x: &FNCoordinates,
    y: &FNCoordinates,
    cutoff: f64,
) -> Result<DeformationReport> {
    let short = short_edges(x);
    let sys_x = short.iter().map(|&e| x.lengths[e]).fold(f64::INFINITY, f64::min);
    if short.is_empty() {
        return Err(Error::Domain("X has no curve shorter than a1".into()));
    }
    let hx = build_holonomy(g, x)?;
    let hy = build_holonomy(g, y)?;
    let cfg = EnumConfig::default();
    let tx = build_table(&hx, cutoff, &cfg)?;
    let ty = build_table(&hy, cutoff, &cfg)?;
    let sys_y = ty.simple().map(|e| e.length).fold(f64::INFINITY, f64::min);

    let mut seen = std::collections::BTreeMap::new();
    for e in tx.entries.iter().chain(&ty.entries) {
        let key = e.word.clone().min(e.word.inverse().canonical());
        seen.entry(key).or_insert_with(|| e.crossings.clone());
    }
    let items: Vec<(CurveWord, Vec<u32>)> = seen.into_iter().collect();
    let lens: Vec<(f64, f64)> = items
        .par_iter()
        .map(|(w, _)| Ok((word_length(&hx, w)?, word_length(&hy, w)?)))
        .collect::<Result<_>>()?;

    let log_sys = sys_x.ln().abs();
    let mut rows = Vec::with_capacity(items.len());
    let (mut r, mut max_disjoint) = (0.0f64, 0.0f64);
    for (id, ((w, m), (lx, ly))) in items.into_iter().zip(lens).enumerate() {
        let crossing = short.iter().any(|&e| m[e] > 0);
        let ratio = lx / ly;
        let regime = if crossing {
            r = r.max(ratio / log_sys);
            Regime::CrossingShort
        } else {
            if ratio > 1.0 + DISJOINT_TOL {
                return Err(Error::RegimeViolation(format!("{w}: {lx} on X vs {ly} on Y")));
            }
            max_disjoint = max_disjoint.max(ratio);
            Regime::DisjointFromShort
        };
        rows.push(DeformRow { id, word: w, length_before: lx, length_after: ly, ratio, regime });
    }
    Ok(DeformationReport { rows, sys_x, sys_y, r, max_disjoint_ratio: max_disjoint })
}

/// Sets the targeted pants-curve lengths to `delta`.
pub fn lengthen_curves(
    _g: &PantsGraph,
    x: &FNCoordinates,
    targets: &[usize],
    delta: f64,
) -> Result<FNCoordinates> {
    let mut y = x.clone();
    for &e in targets {
        let l = *x.lengths.get(e).ok_or_else(|| Error::Domain(format!("no edge {e}")))?;
        if delta < l {
            return Err(Error::Domain(format!("delta {delta} is below the length {l} of edge {e}")));
        }
        y.lengths[e] = delta;
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistOrbit {
    pub edge: usize,
    pub sweep: Vec<(i64, f64)>,
    pub argmin: i64,
    pub min_length: f64,
    /// The curve misses the edge, so the sweep is constant.
    pub disjoint: bool,
}

fn argmin_by_tie_rule(sweep: &[(i64, f64)]) -> (i64, f64) {
    // Lengths within TIE_TOL are equal: symmetric configurations tie exactly but
    // evaluate with different rounding.
    let mut best = sweep[0];
    for &(n, l) in &sweep[1..] {
        let tie = (l - best.1).abs() <= TIE_TOL * best.1;
        let better = (!tie && l < best.1)
            || (tie && (n.abs() < best.0.abs() || (n.abs() == best.0.abs() && n < best.0)));
        if better {
            best = (n, l);
        }
    }
    best
}

fn shifted_length(g: &PantsGraph, x: &FNCoordinates, w: &CurveWord, shifts: &[(usize, i64)]) -> Result<f64> {
    let mut c = x.clone();
    for &(e, n) in shifts {
        c.twists[e] += n as f64;
    }
    word_length(&build_holonomy(g, &c)?, w)
}

/// Lengths of T^n(w), n in [-window, window], for the Dehn twist about edge `e`,
/// obtained by shifting the twist parameter of `e` by n.
pub fn twist_orbit(g: &PantsGraph, x: &FNCoordinates, w: &CurveWord, e: usize, window: u32) -> Result<TwistOrbit> {
    if window < 1 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    if e >= g.n_edges() {
        return Err(Error::Domain(format!("no edge {e}")));
    }
    let n = window as i64;
    let sweep: Vec<(i64, f64)> = (-n..=n)
        .into_par_iter()
        .map(|k| Ok((k, shifted_length(g, x, w, &[(e, k)])?)))
        .collect::<Result<_>>()?;
    let l0 = sweep[n as usize].1;
    let disjoint = sweep.iter().all(|&(_, l)| (l - l0).abs() <= 1e-10 * l0.max(1.0));
    let (argmin, min_length) = if disjoint { (0, l0) } else { argmin_by_tie_rule(&sweep) };
    Ok(TwistOrbit { edge: e, sweep, argmin, min_length, disjoint })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistDescent {
    pub edges: Vec<usize>,
    pub offsets: Vec<i64>,
    pub initial_length: f64,
    pub length: f64,
    /// Some offset sits on the window boundary: a better element may lie outside.
    pub window_exhausted: bool,
    /// length minus the thin-collar model summed over thin edges crossed.
    pub thin_residual: f64,
}

/// Coordinate descent over integer twist offsets on the given edges. The result is
/// descent-optimal: no single-edge unit move improves it.
pub fn minimize_over_twists(
    g: &PantsGraph,
    x: &FNCoordinates,
    w: &CurveWord,
    edges: &[usize],
    window: u32,
) -> Result<TwistDescent> {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != edges.len() {
        return Err(Error::Domain("edges must be pairwise distinct".into()));
    }
    let n = window as i64;
    let mut offsets = vec![0i64; edges.len()];
    let eval = |off: &[i64]| {
        let shifts: Vec<_> = edges.iter().copied().zip(off.iter().copied()).collect();
        shifted_length(g, x, w, &shifts)
    };
    let initial = eval(&offsets)?;
    let mut best = initial;
    loop {
        let moves: Vec<(usize, i64)> = (0..edges.len())
            .flat_map(|i| [(i, -1), (i, 1)])
            .filter(|&(i, d)| (offsets[i] + d).abs() <= n)
            .collect();
        let vals: Vec<f64> = moves
            .par_iter()
            .map(|&(i, d)| {
                let mut o = offsets.clone();
                o[i] += d;
                eval(&o)
            })
            .collect::<Result<_>>()?;
        let pick = vals
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < best)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)));
        match pick {
            Some((k, &v)) => {
                offsets[moves[k].0] += moves[k].1;
                best = v;
            }
            None => break,
        }
    }
    let h: Holonomy = build_holonomy(g, x)?;
    let counts = w.crossing_counts(g.n_edges());
    let mut model = 0.0;
    for e in 0..g.n_edges() {
        let l = h.coords.lengths[e];
        if counts[e] > 0 && l <= TWO_ARCSINH1 {
            model += counts[e] as f64 * thin_crossing_model(l, 0)?;
        }
    }
    let window_exhausted = offsets.iter().any(|o| o.abs() == n);
    Ok(TwistDescent {
        edges: edges.to_vec(),
        offsets,
        initial_length: initial,
        length: best,
        window_exhausted,
        thin_residual: best - model,
    })
}
