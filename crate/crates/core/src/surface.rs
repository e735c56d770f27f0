//! Pants graphs, Fenchel-Nielsen coordinates and the holonomy of the marked surface.
//!
//! Each pants is assembled from a right-angled hexagon walked counterclockwise:
//! boundary side 0 (half its length), seam (0,1), side 1, seam (1,2), side 2, seam (2,0).
//! `frames[s]` is the frame at the start of side s; position 0 on boundary s is that
//! point, and positions are measured as fractions of the boundary length in the
//! direction that keeps the pants on the left. The boundary element h_s translates
//! along boundary s by its length, lifted with negative trace; h2 h1 h0 = 1.
//!
//! A pants curve with endpoints A = (P, s) and B = (Q, t) is glued so that position x
//! on the A side meets position tau - x on the B side (tau the normalized twist).

use serde::{Deserialize, Serialize};

use crate::curves::word::{CurveWord, Letter};
use crate::error::{Error, Result};
use crate::hyptrig::{perp_distinct, trace_to_length};
use crate::moebius::{rotation, translation, Mat2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub pants: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsGraph {
    pub genus: usize,
    /// Edge id at each slot of each pants.
    pub pants: Vec<[usize; 3]>,
    /// Endpoints A and B of each edge.
    pub edges: Vec<[Endpoint; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FNCoordinates {
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
}

impl FNCoordinates {
    pub fn new(lengths: Vec<f64>, twists: Vec<f64>) -> Self {
        FNCoordinates { lengths, twists }
    }

    pub fn validate(&self, g: &PantsGraph) -> Result<()> {
        let n = g.edges.len();
        if self.lengths.len() != n || self.twists.len() != n {
            return Err(Error::InvalidGraph(format!("expected {n} lengths and twists")));
        }
        for (e, (&l, &t)) in self.lengths.iter().zip(&self.twists).enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Domain(format!("length of edge {e} is {l}")));
            }
            if !t.is_finite() {
                return Err(Error::Domain(format!("twist of edge {e} is {t}")));
            }
        }
        Ok(())
    }

    /// Copy with the twist of `e` shifted by `n` full turns.
    pub fn twisted(&self, e: usize, n: f64) -> FNCoordinates {
        let mut c = self.clone();
        c.twists[e] += n;
        c
    }
}

impl PantsGraph {
    /// Builds the graph from the slot table; endpoint A of an edge is its first occurrence.
    pub fn from_slots(genus: usize, pants: Vec<[usize; 3]>) -> Result<PantsGraph> {
        let n_edges = pants.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let mut ends: Vec<Vec<Endpoint>> = vec![Vec::new(); n_edges];
        for (p, slots) in pants.iter().enumerate() {
            for (s, &e) in slots.iter().enumerate() {
                ends[e].push(Endpoint { pants: p, slot: s });
            }
        }
        let mut edges = Vec::with_capacity(n_edges);
        for (e, v) in ends.iter().enumerate() {
            if v.len() != 2 {
                return Err(Error::InvalidGraph(format!("edge {e} used {} times", v.len())));
            }
            edges.push([v[0], v[1]]);
        }
        let g = PantsGraph { genus, pants, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.genus;
        if g < 2 {
            return Err(Error::InvalidGraph("genus must be at least 2".into()));
        }
        if self.pants.len() != 2 * g - 2 {
            return Err(Error::InvalidGraph(format!("{} pants, expected {}", self.pants.len(), 2 * g - 2)));
        }
        if self.edges.len() != 3 * g - 3 {
            return Err(Error::InvalidGraph(format!("{} edges, expected {}", self.edges.len(), 3 * g - 3)));
        }
        let mut used = vec![[false; 3]; self.pants.len()];
        for (e, ends) in self.edges.iter().enumerate() {
            if ends[0] == ends[1] {
                return Err(Error::InvalidGraph(format!("edge {e} glues a slot to itself")));
            }
            for end in ends {
                if end.pants >= self.pants.len() || end.slot > 2 {
                    return Err(Error::InvalidGraph(format!("edge {e} endpoint out of range")));
                }
                if used[end.pants][end.slot] {
                    return Err(Error::InvalidGraph(format!("slot {}.{} used twice", end.pants, end.slot)));
                }
                used[end.pants][end.slot] = true;
                if self.pants[end.pants][end.slot] != e {
                    return Err(Error::InvalidGraph(format!("slot table disagrees with edge {e}")));
                }
            }
        }
        if used.iter().flatten().any(|u| !u) {
            return Err(Error::InvalidGraph("unused slot".into()));
        }
        let tree = self.spanning_tree();
        if tree.parent.iter().skip(1).any(|p| p.is_none()) {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(())
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoint_sign(&self, p: usize, s: usize) -> i64 {
        let e = self.pants[p][s];
        if self.edges[e][0] == (Endpoint { pants: p, slot: s }) {
            1
        } else {
            -1
        }
    }

    /// Breadth-first spanning tree from pants 0, scanning slots in order.
    pub fn spanning_tree(&self) -> SpanningTree {
        let n = self.pants.len();
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut in_tree = vec![false; self.edges.len()];
        let mut order = vec![0usize];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let p = order[i];
            i += 1;
            for s in 0..3 {
                let e = self.pants[p][s];
                let [a, b] = self.edges[e];
                let (other, fwd) = if a.pants == p && a.slot == s { (b.pants, true) } else { (a.pants, false) };
                if !seen[other] {
                    seen[other] = true;
                    parent[other] = Some((e, fwd));
                    in_tree[e] = true;
                    order.push(other);
                }
            }
        }
        SpanningTree { parent, in_tree, order }
    }

    /// Crossing letters of the tree path from pants 0 to `p`.
    pub fn root_path(&self, tree: &SpanningTree, p: usize) -> Vec<Letter> {
        let mut path = Vec::new();
        let mut cur = p;
        while let Some((e, fwd)) = tree.parent[cur] {
            path.push(Letter::Cross { edge: e as u16, fwd });
            let [a, b] = self.edges[e];
            cur = if fwd { a.pants } else { b.pants };
        }
        path.reverse();
        path
    }

    /// Tree path from pants `x` to pants `y` as crossing letters.
    pub fn tree_path(&self, tree: &SpanningTree, x: usize, y: usize) -> Vec<Letter> {
        let px = self.root_path(tree, x);
        let py = self.root_path(tree, y);
        let common = px.iter().zip(&py).take_while(|(a, b)| a == b).count();
        let mut out: Vec<Letter> = px[common..].iter().rev().map(|l| l.inverse()).collect();
        out.extend_from_slice(&py[common..]);
        out
    }

    /// Edges whose removal disconnects the graph (separating pants curves).
    pub fn bridges(&self) -> Vec<bool> {
        (0..self.edges.len())
            .map(|e| {
                let [a, b] = self.edges[e];
                a.pants != b.pants && self.path_avoiding(e, b.pants, a.pants).is_none()
            })
            .collect()
    }

    /// Shortest path (crossing letters) from pants x to y that never uses edge `avoid`.
    pub fn path_avoiding(&self, avoid: usize, x: usize, y: usize) -> Option<Vec<Letter>> {
        let n = self.pants.len();
        let mut prev: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = std::collections::VecDeque::from([x]);
        while let Some(p) = queue.pop_front() {
            if p == y {
                break;
            }
            for s in 0..3 {
                let e = self.pants[p][s];
                if e == avoid {
                    continue;
                }
                let [a, b] = self.edges[e];
                let (other, fwd) = if a.pants == p && a.slot == s { (b.pants, true) } else { (a.pants, false) };
                if !seen[other] {
                    seen[other] = true;
                    prev[other] = Some((p, Letter::Cross { edge: e as u16, fwd }));
                    queue.push_back(other);
                }
            }
        }
        if !seen[y] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = y;
        while cur != x {
            let (p, l) = prev[cur].expect("path");
            path.push(l);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    /// For each pants, the edge to its parent and whether it is crossed A -> B going down.
    pub parent: Vec<Option<(usize, bool)>>,
    pub in_tree: Vec<bool>,
    pub order: Vec<usize>,
}

/// Hexagon data of one pants in its local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PantsFrames {
    pub lengths: [f64; 3],
    /// Frame at the start of each boundary side.
    pub frames: [Mat2; 3],
    /// frames[a]^-1 frames[b].
    pub transition: [[Mat2; 3]; 3],
    /// Boundary elements in local coordinates.
    pub loops: [Mat2; 3],
}

impl PantsFrames {
    pub fn new(l: [f64; 3]) -> Result<PantsFrames> {
        let e01 = perp_distinct(l[0], l[1], l[2])?;
        let e12 = perp_distinct(l[1], l[2], l[0])?;
        let q = rotation(std::f64::consts::FRAC_PI_2);
        let step01 = translation(l[0] / 2.0).mul(&q).mul(&translation(e01)).mul(&q);
        let step12 = translation(l[1] / 2.0).mul(&q).mul(&translation(e12)).mul(&q);
        let f0 = Mat2::IDENTITY;
        let f1 = step01;
        let f2 = step01.mul(&step12);
        let frames = [f0, f1, f2];
        let mut transition = [[Mat2::IDENTITY; 3]; 3];
        transition[0][1] = step01;
        transition[1][2] = step12;
        transition[0][2] = f2;
        for a in 0..3 {
            for b in 0..a {
                transition[a][b] = transition[b][a].inv();
            }
        }
        let loops = [0, 1, 2].map(|s| frames[s].mul(&translation(l[s])).mul(&frames[s].inv()).neg());
        Ok(PantsFrames { lengths: l, frames, transition, loops })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    pub matrix: Mat2,
}

#[derive(Debug, Clone)]
pub struct Holonomy {
    pub graph: PantsGraph,
    pub coords: FNCoordinates,
    pub tree: SpanningTree,
    pub pants: Vec<PantsFrames>,
    /// Core of each crossing, rotation(pi) * translation(-tau * l), between boundary frames.
    pub cross_core: Vec<Mat2>,
    /// Crossing matrices A-coordinates <- B-coordinates.
    pub cross: Vec<Mat2>,
    /// Tree conjugators from base coordinates (pants 0) to each pants.
    pub conj: Vec<Mat2>,
    pub generators: Vec<Generator>,
    /// Pants-curve loop word per edge.
    pub x_words: Vec<CurveWord>,
    /// A loop crossing each edge once (None for separating pants curves).
    pub y_words: Vec<Option<CurveWord>>,
}

impl Holonomy {
    pub fn genus(&self) -> usize {
        self.graph.genus
    }

    fn letter_frames(&self, l: Letter) -> ((usize, usize), Mat2, (usize, usize)) {
        match l {
            Letter::Loop { pants, slot, pow } => {
                let (p, s) = (pants as usize, slot as usize);
                let mut core = translation(pow as f64 * self.pants[p].lengths[s]);
                if pow % 2 != 0 {
                    core = core.neg();
                }
                ((p, s), core, (p, s))
            }
            Letter::Cross { edge, fwd } => {
                let [a, b] = self.graph.edges[edge as usize];
                let c = self.cross_core[edge as usize];
                if fwd {
                    ((a.pants, a.slot), c, (b.pants, b.slot))
                } else {
                    ((b.pants, b.slot), c.inv(), (a.pants, a.slot))
                }
            }
        }
    }

    /// Matrix of a single letter in the local coordinates of the pants it starts in.
    pub fn letter_matrix(&self, l: Letter) -> Mat2 {
        let ((p, s), core, (q, t)) = self.letter_frames(l);
        self.pants[p].frames[s].mul(&core).mul(&self.pants[q].frames[t].inv())
    }

    /// Product of the word (read from `start`) in the local coordinates of its first pants.
    pub fn word_matrix_local(&self, w: &CurveWord, start: usize) -> Mat2 {
        let n = w.letters.len();
        let mut acc = Mat2::IDENTITY;
        let mut first_in = (0, 0);
        let mut prev_out: Option<(usize, usize)> = None;
        for i in 0..n {
            let (inp, core, out) = self.letter_frames(w.letters[(start + i) % n]);
            match prev_out {
                None => first_in = inp,
                Some((p, s)) => acc = acc.mul(&self.pants[p].transition[s][inp.1]),
            }
            acc = acc.mul(&core);
            prev_out = Some(out);
        }
        let (p, s) = prev_out.expect("nonempty word");
        self.pants[first_in.0].frames[first_in.1].mul(&acc).mul(&self.pants[p].frames[s].inv())
    }

    /// Trace of the cyclic word.
    pub fn word_trace(&self, w: &CurveWord) -> f64 {
        self.word_product(w).trace()
    }

    /// Conjugate of the word's image, telescoped through boundary frames so that
    /// pure boundary powers come out exactly diagonal.
    pub fn word_product(&self, w: &CurveWord) -> Mat2 {
        let n = w.letters.len();
        let parts: Vec<_> = w.letters.iter().map(|&l| self.letter_frames(l)).collect();
        let mut acc = Mat2::IDENTITY;
        for i in 0..n {
            let (_, core, out) = parts[i];
            let next_in = parts[(i + 1) % n].0;
            acc = acc.mul(&core);
            if out.1 != next_in.1 {
                acc = acc.mul(&self.pants[out.0].transition[out.1][next_in.1]);
            }
        }
        acc
    }

    /// Holonomy image of a closed word in base coordinates.
    pub fn word_matrix(&self, w: &CurveWord) -> Result<Mat2> {
        let p = w.check_closed(&self.graph)?;
        let m = self.word_matrix_local(w, 0);
        Ok(self.conj[p].mul(&m).mul(&self.conj[p].inv()))
    }
}

pub fn build_holonomy(g: &PantsGraph, x: &FNCoordinates) -> Result<Holonomy> {
    g.validate()?;
    x.validate(g)?;
    let pants = g
        .pants
        .iter()
        .map(|slots| PantsFrames::new(slots.map(|e| x.lengths[e])))
        .collect::<Result<Vec<_>>>()?;
    let rot_pi = rotation(std::f64::consts::PI);
    let mut cross_core = Vec::with_capacity(g.n_edges());
    let mut cross = Vec::with_capacity(g.n_edges());
    for (e, [a, b]) in g.edges.iter().enumerate() {
        let core = rot_pi.mul(&translation(-x.twists[e] * x.lengths[e]));
        cross_core.push(core);
        cross.push(pants[a.pants].frames[a.slot].mul(&core).mul(&pants[b.pants].frames[b.slot].inv()));
    }
    let tree = g.spanning_tree();
    let mut conj = vec![Mat2::IDENTITY; g.pants.len()];
    for &p in tree.order.iter().skip(1) {
        let (e, fwd) = tree.parent[p].expect("connected");
        let [a, b] = g.edges[e];
        let (up, m) = if fwd { (a.pants, cross[e]) } else { (b.pants, cross[e].inv()) };
        conj[p] = conj[up].mul(&m);
    }
    let mut generators = Vec::new();
    for (p, pf) in pants.iter().enumerate() {
        for s in 0..2 {
            generators.push(Generator {
                name: format!("a{p}.{s}"),
                matrix: conj[p].mul(&pf.loops[s]).mul(&conj[p].inv()),
            });
        }
    }
    for (e, [a, b]) in g.edges.iter().enumerate() {
        if !tree.in_tree[e] {
            generators.push(Generator {
                name: format!("t{e}"),
                matrix: conj[a.pants].mul(&cross[e]).mul(&conj[b.pants].inv()),
            });
        }
    }
    let x_words = g.edges.iter().map(|[a, _]| CurveWord::boundary(a.pants, a.slot)).collect();
    let bridges = g.bridges();
    let y_words = (0..g.n_edges())
        .map(|e| {
            if bridges[e] {
                return None;
            }
            let [a, b] = g.edges[e];
            let mut letters = vec![Letter::Cross { edge: e as u16, fwd: true }];
            // Non-tree edges close up through the tree so that y_e meets no other
            // non-tree edge; this keeps the homology basis unimodular.
            if tree.in_tree[e] {
                letters.extend(g.path_avoiding(e, b.pants, a.pants)?);
            } else {
                letters.extend(g.tree_path(&tree, b.pants, a.pants));
            }
            Some(CurveWord::new(letters))
        })
        .collect();
    let h = Holonomy { graph: g.clone(), coords: x.clone(), tree, pants, cross_core, cross, conj, generators, x_words, y_words };
    for e in 0..g.n_edges() {
        let l = word_length(&h, &h.x_words[e])?;
        if (l - x.lengths[e]).abs() > 1e-8 * x.lengths[e] {
            return Err(Error::ValidationFailed(format!("edge {e}: recovered {l}, expected {}", x.lengths[e])));
        }
    }
    Ok(h)
}

/// Geodesic length of the free homotopy class of a closed word.
pub fn word_length(h: &Holonomy, w: &CurveWord) -> Result<f64> {
    w.check_closed(&h.graph)?;
    let m = h.word_product(w);
    let tr = m.trace();
    if tr.abs() > 3.0 {
        return trace_to_length(tr);
    }
    // tr^2 - 4 written without the cancellation near |tr| = 2.
    let disc = (m.a - m.d).powi(2) + 4.0 * m.b * m.c;
    if !(disc > 0.0) || tr.abs() <= 2.0 {
        return Err(Error::NotHyperbolic(tr.abs()));
    }
    Ok(2.0 * (disc.sqrt() / 2.0).asinh())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub defects: Vec<String>,
    pub words_checked: usize,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks determinants, pants-curve trace recovery and short-word hyperbolicity.
pub fn validate(h: &Holonomy) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for gen in &h.generators {
        let m = gen.matrix;
        if (m.det() - 1.0).abs() > crate::moebius::DET_TOL * m.norm2().max(1.0) {
            rep.defects.push(format!("generator {} has determinant {}", gen.name, m.det()));
        }
    }
    for (e, w) in h.x_words.iter().enumerate() {
        let l = h.coords.lengths[e];
        match word_length(h, w) {
            Ok(r) if (r - l).abs() <= 1e-8 * l => {}
            Ok(r) => rep.defects.push(format!("edge {e}: recovered length {r}, expected {l}")),
            Err(err) => rep.defects.push(format!("edge {e}: {err}")),
        }
    }
    // Boundary generators must carry the prescribed trace.
    for (p, slots) in h.graph.pants.iter().enumerate() {
        for s in 0..2 {
            let gen = &h.generators[2 * p + s];
            let want = -2.0 * (h.coords.lengths[slots[s]] / 2.0).cosh();
            let tol = 1e-8 * gen.matrix.norm2().max(1.0);
            if (gen.matrix.trace() - want).abs() > tol {
                rep.defects.push(format!("generator {} has trace {}, expected {want}", gen.name, gen.matrix.trace()));
            }
        }
    }
    // Words of length <= 4 in the generators: relators map to +-I, everything else
    // must be hyperbolic. Products of large matrices lose absolute accuracy in the
    // trace, so a word only counts as a defect when its trace is below 2 by more
    // than the rounding bound. Pure powers of one boundary generator are skipped.
    let gens: Vec<Mat2> = h.generators.iter().map(|g| g.matrix).collect();
    let norms: Vec<f64> = gens.iter().map(|m| m.norm2().sqrt().max(1.0)).collect();
    let n = gens.len();
    let letters: Vec<(usize, bool)> = (0..n).flat_map(|i| [(i, true), (i, false)]).collect();
    let mat = |(i, pos): (usize, bool)| if pos { gens[i] } else { gens[i].inv() };
    let mut stack: Vec<(Vec<(usize, bool)>, Mat2, f64)> =
        letters.iter().map(|&l| (vec![l], mat(l), norms[l.0])).collect();
    while let Some((word, m, cond)) = stack.pop() {
        rep.words_checked += 1;
        let single = word.iter().all(|&(i, _)| i == word[0].0);
        let tr = m.trace().abs();
        let round = 1e-6 + 64.0 * f64::EPSILON * cond * cond;
        let is_identity = m.approx_eq_projective(&Mat2::IDENTITY, round);
        if !single && !is_identity && tr < 2.0 - round {
            let names: Vec<String> = word
                .iter()
                .map(|&(i, pos)| format!("{}{}", h.generators[i].name, if pos { "" } else { "^-1" }))
                .collect();
            rep.defects.push(format!("word {} has |trace| {tr}", names.join(" ")));
        }
        if word.len() < 4 {
            let last = *word.last().expect("nonempty");
            for &l in &letters {
                if l.0 == last.0 && l.1 != last.1 {
                    continue;
                }
                let mut w2 = word.clone();
                w2.push(l);
                stack.push((w2, m.mul(&mat(l)), cond * norms[l.0]));
            }
        }
    }
    rep
}

pub mod presets {
    //! Named pants graphs and the parameter families used in the reproductions.

    use super::*;

    /// Two pants glued slot-to-slot along three curves.
    pub fn theta_graph() -> PantsGraph {
        PantsGraph::from_slots(2, vec![[0, 1, 2], [0, 1, 2]]).expect("valid")
    }

    /// Two one-holed tori joined along a separating curve (edge 1).
    pub fn dumbbell_graph() -> PantsGraph {
        PantsGraph::from_slots(2, vec![[0, 0, 1], [2, 2, 1]]).expect("valid")
    }

    /// Genus three, six nonseparating pants curves: edges 0..5 are gamma_1..gamma_6.
    pub fn genus3_graph() -> PantsGraph {
        PantsGraph::from_slots(3, vec![[0, 1, 2], [0, 1, 3], [2, 4, 5], [3, 4, 5]]).expect("valid")
    }

    /// Genus three with gamma_2 replaced by the separating curve gamma_2' (edge 1),
    /// which cuts off a one-holed torus containing gamma_1 (edge 0).
    pub fn genus3_separating_graph() -> PantsGraph {
        PantsGraph::from_slots(3, vec![[0, 0, 1], [1, 2, 3], [2, 4, 5], [3, 4, 5]]).expect("valid")
    }

    pub fn symmetric_genus2() -> (PantsGraph, FNCoordinates) {
        (theta_graph(), FNCoordinates::new(vec![2.0; 3], vec![0.0; 3]))
    }

    /// l(gamma_1) = n^-delta, all others 1/n, zero twists.
    pub fn thin_family(delta: f64, n: f64) -> (PantsGraph, FNCoordinates) {
        let mut l = vec![1.0 / n; 6];
        l[0] = n.powf(-delta);
        (genus3_graph(), FNCoordinates::new(l, vec![0.0; 6]))
    }

    /// l(gamma_1) = n^-(1 - 1/n), gamma_2' and gamma_3..gamma_6 at 1/n, zero twists.
    pub fn separating_thin_family(n: f64) -> (PantsGraph, FNCoordinates) {
        let mut l = vec![1.0 / n; 6];
        l[0] = n.powf(-(1.0 - 1.0 / n));
        (genus3_separating_graph(), FNCoordinates::new(l, vec![0.0; 6]))
    }
}
