//! Enumeration of simple closed geodesics below a length cutoff.
//!
//! Simple closed curves are generated from normal coordinates relative to the pants
//! decomposition: an intersection count m_e with every pants curve and an integer
//! twist t_e on every crossed pants curve. The counts fix the arcs inside each pants
//! (standard models, see `pants_arcs`); the twists fix how the strands are matched
//! across each collar. Tracing the arcs gives a word in the pants groupoid.
//!
//! Count vectors are pruned with a rigorous lower bound (every arc is at least as long
//! as the common perpendicular of its boundaries). For each surviving count vector the
//! twists are searched by descent followed by a flood fill over unit steps, which
//! relies on convexity of length in the twist parameters; hitting the per-vector
//! node limit marks the table uncertified.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::homology::{HomologyBasis, HomologyClass};
use super::word::{CurveWord, Letter};
use crate::error::{Error, Result};
use crate::hyptrig::{collar_half_width, perp_distinct, perp_same};
use crate::surface::{word_length, Holonomy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumConfig {
    /// Twist configurations visited per count vector before giving up.
    pub node_limit: usize,
    /// Slack above the cutoff kept while flooding over twists.
    pub margin: f64,
    /// Count vectors considered before giving up.
    pub max_count_vectors: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { node_limit: 1_000_000, margin: 1.0, max_count_vectors: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub word: CurveWord,
    pub length: f64,
    pub homology: HomologyClass,
    pub simple: bool,
    /// Geometric intersection with each pants curve.
    pub crossings: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub entries: Vec<CurveEntry>,
    pub cutoff: f64,
    pub certified: bool,
}

impl CurveTable {
    pub fn simple(&self) -> impl Iterator<Item = &CurveEntry> {
        self.entries.iter().filter(|e| e.simple)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Entries below a smaller cutoff (the table stays complete below it).
    pub fn truncated(&self, cutoff: f64) -> CurveTable {
        CurveTable {
            entries: self.entries.iter().filter(|e| e.length <= cutoff).cloned().collect(),
            cutoff: cutoff.min(self.cutoff),
            certified: self.certified,
        }
    }
}

/// An arc of a curve inside one pants: endpoints (slot, position) and the boundary
/// letters met when running from end 0 to end 1.
#[derive(Debug, Clone, PartialEq)]
struct Arc {
    pants: usize,
    ends: [(usize, f64); 2],
    letters: Vec<Letter>,
}

/// Arcs of the standard model in a pants with boundary counts m (even total).
///
/// Positions are fractions of the boundary length from the foot of seam (s-1, s).
/// An arc between s and s+1 runs beside seam (s, s+1), from s at 1/2 + d to s+1 at -d.
/// When m_s exceeds m_{s+1} + m_{s+2}, the surplus forms arcs from s back to s that go
/// around boundary s+1, from 1/4 + d to 3/4 - d. Larger d is further from the seam.
fn pants_arcs(p: usize, m: [u32; 3]) -> Vec<Arc> {
    let mut arcs = Vec::new();
    let big = (0..3).find(|&s| m[s] > m[(s + 1) % 3] + m[(s + 2) % 3]);
    let family = |s: usize, count: u32, arcs: &mut Vec<Arc>| {
        let u = (s + 1) % 3;
        for i in 0..count {
            let d = (i + 1) as f64 / (16.0 * (count + 1) as f64);
            arcs.push(Arc { pants: p, ends: [(s, 0.5 + d), (u, -d)], letters: Vec::new() });
        }
    };
    match big {
        None => {
            for s in 0..3 {
                let (a, b, c) = (m[s], m[(s + 1) % 3], m[(s + 2) % 3]);
                family(s, (a + b - c) / 2, &mut arcs);
            }
        }
        Some(s) => {
            let u = (s + 1) % 3;
            let v = (s + 2) % 3;
            family(s, m[u], &mut arcs);
            family(v, m[v], &mut arcs);
            let loops = (m[s] - m[u] - m[v]) / 2;
            for i in 0..loops {
                let d = (i + 1) as f64 / (8.0 * (loops + 1) as f64);
                arcs.push(Arc {
                    pants: p,
                    ends: [(s, 0.25 + d), (s, 0.75 - d)],
                    letters: vec![Letter::Loop { pants: p as u16, slot: u as u8, pow: 1 }],
                });
            }
        }
    }
    arcs
}

/// Arc layout for one count vector, independent of the twists.
struct Layout {
    arcs: Vec<Arc>,
    /// Per edge with m_e > 0: endpoints on the A side sorted by position mod 1, and on
    /// the B side sorted by image position mod 1, as (arc, end, integer shift).
    sides: Vec<Option<EdgeSides>>,
}

struct EdgeSides {
    a: Vec<(usize, usize, i64)>,
    b: Vec<(usize, usize, i64)>,
}

fn frac_floor(x: f64) -> (f64, i64) {
    let f = x.floor();
    (x - f, f as i64)
}

impl Layout {
    fn new(h: &Holonomy, m: &[u32]) -> Layout {
        let g = &h.graph;
        let mut arcs = Vec::new();
        for (p, slots) in g.pants.iter().enumerate() {
            arcs.extend(pants_arcs(p, slots.map(|e| m[e])));
        }
        let mut sides = Vec::with_capacity(m.len());
        for (e, [a, b]) in g.edges.iter().enumerate() {
            if m[e] == 0 {
                sides.push(None);
                continue;
            }
            let tau = h.coords.twists[e];
            let mut ea = Vec::new();
            let mut eb = Vec::new();
            for (i, arc) in arcs.iter().enumerate() {
                for (k, &(slot, phi)) in arc.ends.iter().enumerate() {
                    if arc.pants == a.pants && slot == a.slot {
                        let (f, n) = frac_floor(phi);
                        ea.push((f, i, k, n));
                    }
                    if arc.pants == b.pants && slot == b.slot {
                        // Image on the A side is tau - phi; shift it into [0, 1).
                        let (f, n) = frac_floor(tau - phi);
                        eb.push((f, i, k, -n));
                    }
                }
            }
            ea.sort_by(|x, y| x.0.total_cmp(&y.0));
            eb.sort_by(|x, y| x.0.total_cmp(&y.0));
            debug_assert_eq!(ea.len(), m[e] as usize);
            debug_assert_eq!(eb.len(), m[e] as usize);
            sides.push(Some(EdgeSides {
                a: ea.into_iter().map(|(_, i, k, n)| (i, k, n)).collect(),
                b: eb.into_iter().map(|(_, i, k, n)| (i, k, n)).collect(),
            }));
        }
        Layout { arcs, sides }
    }

    /// Components of the multicurve with the given twists (entries for edges with
    /// m_e = 0 are ignored).
    fn trace(&self, h: &Holonomy, twists: &[i64]) -> Vec<CurveWord> {
        let g = &h.graph;
        let n = self.arcs.len();
        // partner[arc][end] = (arc', end', letters leaving through this end).
        let mut partner: Vec<[(usize, usize, Vec<Letter>); 2]> =
            (0..n).map(|_| [(0, 0, Vec::new()), (0, 0, Vec::new())]).collect();
        for (e, sides) in self.sides.iter().enumerate() {
            let Some(sd) = sides else { continue };
            let m = sd.a.len() as i64;
            let [ea, eb] = g.edges[e];
            for (i, &(ai, ak, an)) in sd.a.iter().enumerate() {
                let shifted = i as i64 + twists[e];
                let j = shifted.rem_euclid(m) as usize;
                let c = shifted.div_euclid(m);
                let (bi, bk, bn) = sd.b[j];
                let k = an + c + bn;
                let loop_a = Letter::Loop { pants: ea.pants as u16, slot: ea.slot as u8, pow: k as i32 };
                let loop_b = Letter::Loop { pants: eb.pants as u16, slot: eb.slot as u8, pow: k as i32 };
                let mut fwd = Vec::with_capacity(2);
                let mut back = Vec::with_capacity(2);
                if k != 0 {
                    fwd.push(loop_a);
                    back.push(loop_b);
                }
                fwd.push(Letter::Cross { edge: e as u16, fwd: true });
                back.push(Letter::Cross { edge: e as u16, fwd: false });
                partner[ai][ak] = (bi, bk, fwd);
                partner[bi][bk] = (ai, ak, back);
            }
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut letters = Vec::new();
            let (mut arc, mut entry) = (start, 0usize);
            for _ in 0..=n {
                seen[arc] = true;
                let a = &self.arcs[arc];
                if entry == 0 {
                    letters.extend(a.letters.iter().copied());
                } else {
                    letters.extend(a.letters.iter().rev().map(|l| l.inverse()));
                }
                let exit = 1 - entry;
                let (na, ne, ref strand) = partner[arc][exit];
                letters.extend(strand.iter().copied());
                arc = na;
                entry = ne;
                if arc == start && entry == 0 {
                    break;
                }
            }
            out.push(CurveWord::new(letters));
        }
        out
    }
}

/// Per-pants perpendicular lengths: eta[s] between s and s+1, loop[s] from s around s+1.
fn pants_perps(l: [f64; 3]) -> Result<([f64; 3], [f64; 3])> {
    let mut eta = [0.0; 3];
    for s in 0..3 {
        eta[s] = perp_distinct(l[s], l[(s + 1) % 3], l[(s + 2) % 3])?;
    }
    let mut lp = [0.0; 3];
    for s in 0..3 {
        lp[s] = perp_same(l[s], l[(s + 1) % 3], eta[s])?;
    }
    Ok((eta, lp))
}

/// Lower bound on the length of any curve with these intersection counts.
fn count_lower_bound(h: &Holonomy, perps: &[([f64; 3], [f64; 3])], m: &[u32]) -> f64 {
    let mut lb = 0.0;
    for (p, slots) in h.graph.pants.iter().enumerate() {
        let c = slots.map(|e| m[e]);
        let (eta, lp) = perps[p];
        match (0..3).find(|&s| c[s] > c[(s + 1) % 3] + c[(s + 2) % 3]) {
            None => {
                for s in 0..3 {
                    let k = (c[s] + c[(s + 1) % 3] - c[(s + 2) % 3]) / 2;
                    lb += k as f64 * eta[s];
                }
            }
            Some(s) => {
                let (u, v) = ((s + 1) % 3, (s + 2) % 3);
                lb += c[u] as f64 * eta[s] + c[v] as f64 * eta[v];
                lb += ((c[s] - c[u] - c[v]) / 2) as f64 * lp[s];
            }
        }
    }
    let collar: f64 = m
        .iter()
        .zip(&h.coords.lengths)
        .map(|(&k, &l)| k as f64 * 2.0 * collar_half_width(l).unwrap_or(0.0))
        .sum();
    lb.max(collar)
}

/// All count vectors with even parity at every pants and lower bound within cutoff.
fn count_vectors(h: &Holonomy, perps: &[([f64; 3], [f64; 3])], cutoff: f64, limit: usize) -> (Vec<Vec<u32>>, bool) {
    let g = &h.graph;
    let n = g.n_edges();
    // Cheapest share of an arc at each endpoint, then per crossing of an edge.
    let mut end_cost = vec![[0.0f64; 3]; g.pants.len()];
    for (p, (eta, lp)) in perps.iter().enumerate() {
        for s in 0..3 {
            let v = (s + 2) % 3;
            end_cost[p][s] = eta[s].min(eta[v]).min(lp[s]).min(lp[s]) / 2.0;
        }
    }
    let unit: Vec<f64> = (0..n)
        .map(|e| {
            let [a, b] = g.edges[e];
            let arcs = end_cost[a.pants][a.slot] + end_cost[b.pants][b.slot];
            arcs.max(2.0 * collar_half_width(h.coords.lengths[e]).unwrap_or(0.0))
        })
        .collect();
    let mut out = Vec::new();
    let mut m = vec![0u32; n];
    let mut complete = true;
    fn rec(
        e: usize,
        budget: f64,
        unit: &[f64],
        m: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        limit: usize,
        complete: &mut bool,
    ) {
        if out.len() >= limit {
            *complete = false;
            return;
        }
        if e == m.len() {
            out.push(m.clone());
            return;
        }
        let mut k = 0u32;
        while k as f64 * unit[e] <= budget + 1e-12 {
            m[e] = k;
            rec(e + 1, budget - k as f64 * unit[e], unit, m, out, limit, complete);
            k += 1;
            if unit[e] <= 0.0 {
                break;
            }
        }
        m[e] = 0;
    }
    rec(0, cutoff, &unit, &mut m, &mut out, limit, &mut complete);
    let out = out
        .into_iter()
        .filter(|m| m.iter().any(|&k| k > 0))
        .filter(|m| g.pants.iter().all(|slots| slots.iter().map(|&e| m[e]).sum::<u32>() % 2 == 0))
        .filter(|m| count_lower_bound(h, perps, m) <= cutoff)
        .collect();
    (out, complete)
}

struct Found {
    word: CurveWord,
    length: f64,
}

/// Twist search for one count vector; returns curves within cutoff and whether the
/// search finished inside the node limit.
fn search_twists(h: &Holonomy, m: &[u32], cutoff: f64, cfg: &EnumConfig) -> (Vec<Found>, bool) {
    let layout = Layout::new(h, m);
    let active: Vec<usize> = (0..m.len()).filter(|&e| m[e] > 0).collect();
    let eval = |t: &[i64]| -> (f64, Option<Found>) {
        let comps = layout.trace(h, t);
        let mut total = 0.0;
        for c in &comps {
            match word_length(h, c) {
                Ok(l) => total += l,
                Err(_) => return (f64::INFINITY, None),
            }
        }
        if comps.len() == 1 {
            let word = comps[0].reduced(&h.graph).canonical();
            (total, Some(Found { word, length: total }))
        } else {
            (total, None)
        }
    };
    let n = m.len();
    let mut t = vec![0i64; n];
    let mut best = eval(&t).0;
    let mut steps = 0;
    loop {
        let mut improved = false;
        for &e in &active {
            for d in [1i64, -1] {
                loop {
                    t[e] += d;
                    let v = eval(&t).0;
                    steps += 1;
                    if v < best - 1e-12 {
                        best = v;
                        improved = true;
                    } else {
                        t[e] -= d;
                        break;
                    }
                }
            }
        }
        if !improved || steps > cfg.node_limit {
            break;
        }
    }
    let mut out = Vec::new();
    if best > cutoff + cfg.margin {
        return (out, steps <= cfg.node_limit);
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(t.clone());
    queue.push_back(t);
    let mut complete = true;
    while let Some(t) = queue.pop_front() {
        let (v, found) = eval(&t);
        if v > cutoff + cfg.margin {
            continue;
        }
        if let Some(f) = found {
            if f.length <= cutoff {
                out.push(f);
            }
        }
        for &e in &active {
            for d in [1i64, -1] {
                let mut u = t.clone();
                u[e] += d;
                if seen.len() >= cfg.node_limit {
                    complete = false;
                    break;
                }
                if seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
    }
    (out, complete)
}

/// Simple closed geodesics of length at most `cutoff`, both orientations.
pub fn build_table(h: &Holonomy, cutoff: f64, cfg: &EnumConfig) -> Result<CurveTable> {
    if !(cutoff >= 0.0) {
        return Err(Error::Domain(format!("cutoff {cutoff}")));
    }
    let g = &h.graph;
    let hb = HomologyBasis::new(g);
    let perps = h
        .pants
        .iter()
        .map(|pf| pants_perps(pf.lengths))
        .collect::<Result<Vec<_>>>()?;
    let (vectors, mut certified) = count_vectors(h, &perps, cutoff, cfg.max_count_vectors);
    let results: Vec<(Vec<Found>, bool)> =
        vectors.par_iter().map(|m| search_twists(h, m, cutoff, cfg)).collect();
    let mut entries = Vec::new();
    let mut push = |word: CurveWord, length: f64, m: Vec<u32>| {
        let homology = hb.abelianize(&word);
        let inv = word.inverse().canonical();
        let inv_h = homology.neg();
        entries.push(CurveEntry { word, length, homology, simple: true, crossings: m.clone() });
        entries.push(CurveEntry { word: inv, length, homology: inv_h, simple: true, crossings: m });
    };
    for e in 0..g.n_edges() {
        let l = h.coords.lengths[e];
        if l <= cutoff {
            push(h.x_words[e].canonical(), l, vec![0u32; g.n_edges()]);
        }
    }
    for (m, (found, complete)) in vectors.iter().zip(results) {
        certified &= complete;
        for f in found {
            push(f.word, f.length, m.clone());
        }
    }
    entries.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    entries.dedup_by(|a, b| a.word == b.word);
    Ok(CurveTable { entries, cutoff, certified })
}

/// Words of all simple closed geodesics up to the cutoff; fails when the search budget
/// was not enough to certify completeness.
pub fn enumerate_classes(h: &Holonomy, cutoff: f64) -> Result<Vec<CurveWord>> {
    let cfg = EnumConfig::default();
    let t = build_table(h, cutoff, &cfg)?;
    if !t.certified {
        return Err(Error::BudgetExceeded(cfg.node_limit));
    }
    Ok(t.entries.into_iter().map(|e| e.word).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::intersect::self_int_count;
    use crate::surface::{build_holonomy, presets, FNCoordinates};

    #[test]
    fn symmetric_surface_short_curves() {
        let (g, x) = presets::symmetric_genus2();
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 2.1, &EnumConfig::default()).unwrap();
        assert!(t.certified);
        assert_eq!(t.len(), 6);
        assert!(t.entries.iter().all(|e| (e.length - 2.0).abs() < 1e-9));
        assert!(build_table(&h, 1.9, &EnumConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn enumerated_curves_are_simple() {
        let g = presets::theta_graph();
        let x = FNCoordinates::new(vec![1.3, 0.9, 1.7], vec![0.21, -0.37, 0.05]);
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 6.0, &EnumConfig::default()).unwrap();
        assert!(t.len() > 6);
        for e in &t.entries {
            assert_eq!(self_int_count(&h, &e.word).unwrap(), 0, "{} ({})", e.word, e.length);
            let l = word_length(&h, &e.word).unwrap();
            assert!((l - e.length).abs() < 1e-9 * l);
        }
    }

    #[test]
    fn tables_grow_with_cutoff() {
        let g = presets::dumbbell_graph();
        let x = FNCoordinates::new(vec![1.1, 0.6, 1.4], vec![0.1, 0.3, -0.2]);
        let h = build_holonomy(&g, &x).unwrap();
        let a = build_table(&h, 5.0, &EnumConfig::default()).unwrap();
        let b = build_table(&h, 7.0, &EnumConfig::default()).unwrap();
        let words: HashSet<_> = b.entries.iter().map(|e| e.word.clone()).collect();
        assert!(a.entries.iter().all(|e| words.contains(&e.word)));
        assert!(b.len() > a.len());
        assert_eq!(b.truncated(5.0).entries, a.entries);
    }
}
