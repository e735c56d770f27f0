//! Systoles, lower bounds for the algebraic intersection form K, the asymptotic
//! predictor built from short nonseparating curves and their duals, and searches
//! for homology bases and surgery witnesses.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{
    algebraic_int, build_table, geometric_int, pairing_matrix, EnumConfig, CurveEntry, CurveTable, CurveWord, HomologyBasis, HomologyClass,
    PairingMatrix,
};
use crate::error::{Error, Result};
use crate::hyptrig::A1;
use crate::surface::Holonomy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Systole {
    pub length: f64,
    pub witness: CurveWord,
    /// The table is complete up to twice the value found.
    pub certified: bool,
}

fn shortest(table: &CurveTable, keep: impl Fn(&CurveEntry) -> bool) -> Result<Systole> {
    // Entries are sorted by (length, word), so the first match is the canonical witness.
    let e = table.simple().find(|e| keep(e)).ok_or(Error::EmptyTable)?;
    Ok(Systole {
        length: e.length,
        witness: e.word.clone(),
        certified: table.certified && table.cutoff >= 2.0 * e.length,
    })
}

pub fn systole(_h: &Holonomy, table: &CurveTable) -> Result<Systole> {
    shortest(table, |_| true)
}

pub fn homological_systole(_h: &Holonomy, table: &CurveTable) -> Result<Systole> {
    shortest(table, |e| !e.homology.is_zero())
}

/// Upper envelope 9 / sys_h^2 for K.
pub fn envelope(sys_h: f64) -> f64 {
    9.0 / (sys_h * sys_h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimate {
    pub value: f64,
    pub witness: (CurveWord, CurveWord),
    pub int: i64,
    pub lengths: (f64, f64),
    pub cutoff: f64,
    pub certified: bool,
}

/// Best |Int(a, b)| / (l(a) l(b)) over ordered pairs of entries. Ties go to the
/// lexicographically smallest witness pair, so the result does not depend on the
/// order of `entries`.
pub fn k_from_entries(
    entries: &[&CurveEntry],
    p: &PairingMatrix,
    cutoff: f64,
    certified: bool,
) -> Option<KEstimate> {
    let pb: Vec<HomologyClass> = entries
        .iter()
        .map(|e| HomologyClass {
            coords: (0..p.rank()).map(|i| (0..p.rank()).map(|j| p.p[i][j] * e.homology.coords[j]).sum()).collect(),
        })
        .collect();
    let better = |a: &(f64, usize, usize), b: &(f64, usize, usize)| {
        a.0 > b.0
            || (a.0 == b.0
                && (&entries[a.1].word, &entries[a.2].word) < (&entries[b.1].word, &entries[b.2].word))
    };
    let best = (0..entries.len())
        .into_par_iter()
        .filter_map(|i| {
            let mut best: Option<(f64, usize, usize)> = None;
            for j in 0..entries.len() {
                let int: i64 = entries[i].homology.coords.iter().zip(&pb[j].coords).map(|(x, y)| x * y).sum();
                if int == 0 {
                    continue;
                }
                let cand = (int.abs() as f64 / (entries[i].length * entries[j].length), i, j);
                if best.as_ref().map_or(true, |b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
            best
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })?;
    let (value, i, j) = best;
    let (a, b) = (entries[i], entries[j]);
    Some(KEstimate {
        value,
        witness: (a.word.clone(), b.word.clone()),
        int: algebraic_int(&a.homology, &b.homology, p),
        lengths: (a.length, b.length),
        cutoff,
        certified,
    })
}

/// Lower bound for K from the simple curves of the table. A table whose simple
/// curves pair trivially yields value 0 with an empty witness.
pub fn k_lower_bound(h: &Holonomy, table: &CurveTable) -> Result<KEstimate> {
    let p = pairing_matrix(h)?;
    k_lower_bound_with(&p, table)
}

pub fn k_lower_bound_with(p: &PairingMatrix, table: &CurveTable) -> Result<KEstimate> {
    let entries: Vec<&CurveEntry> = table.simple().collect();
    if entries.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(k_from_entries(&entries, p, table.cutoff, table.certified).unwrap_or_else(|| KEstimate {
        value: 0.0,
        witness: (entries[0].word.clone(), entries[0].word.clone()),
        int: 0,
        lengths: (entries[0].length, entries[0].length),
        cutoff: table.cutoff,
        certified: table.certified,
    }))
}

/// Geometric intersection number of two table entries; a curve meets itself (or
/// its reverse) zero times.
pub fn entry_int(h: &Holonomy, a: &CurveEntry, b: &CurveEntry) -> Result<usize> {
    match geometric_int(h, &a.word, &b.word) {
        Err(Error::SharedGeodesic) => Ok(0),
        r => r,
    }
}

/// One orientation per unoriented curve: the entry whose word is smaller than its reverse.
fn unoriented(table: &CurveTable) -> Vec<&CurveEntry> {
    table.simple().filter(|e| e.word <= e.word.inverse().canonical()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPair {
    pub gamma: CurveWord,
    pub len_gamma: f64,
    pub alpha: CurveWord,
    pub len_alpha: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsympPrediction {
    pub threshold: f64,
    pub cutoff: f64,
    pub pairs: Vec<DualPair>,
    /// Short curves whose dual was not found below the cutoff.
    pub missing: Vec<CurveWord>,
    pub predictor: f64,
    /// No missing curve could beat the predictor: 1 / (l(gamma) * cutoff) <= predictor.
    pub settled: bool,
}

/// Shortest simple curve meeting `gamma` exactly once, if one is in the table.
fn shortest_dual(h: &Holonomy, p: &PairingMatrix, table: &CurveTable, gamma: &CurveEntry) -> Result<Option<CurveEntry>> {
    // |Int| <= i and Int = i mod 2, so i = 1 forces |Int| = 1.
    for e in table.simple() {
        if algebraic_int(&gamma.homology, &e.homology, p).abs() != 1 {
            continue;
        }
        if entry_int(h, gamma, e)? == 1 {
            return Ok(Some(e.clone()));
        }
    }
    Ok(None)
}

/// max over short nonseparating gamma of 1 / (l(gamma) l(alpha_gamma)).
pub fn asymp_predictor(h: &Holonomy, table: &CurveTable, threshold: f64) -> Result<AsympPrediction> {
    let p = pairing_matrix(h)?;
    let gammas: Vec<&CurveEntry> =
        unoriented(table).into_iter().filter(|e| e.length <= threshold && !e.homology.is_zero()).collect();
    if gammas.is_empty() {
        return Err(Error::Domain(format!("no nonseparating simple curve of length <= {threshold}")));
    }
    let duals: Vec<Option<CurveEntry>> =
        gammas.par_iter().map(|g| shortest_dual(h, &p, table, g)).collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut missing = Vec::new();
    for (g, d) in gammas.iter().zip(duals) {
        match d {
            Some(a) => pairs.push(DualPair {
                gamma: g.word.clone(),
                len_gamma: g.length,
                alpha: a.word.clone(),
                len_alpha: a.length,
                value: 1.0 / (g.length * a.length),
            }),
            None => missing.push(g.word.clone()),
        }
    }
    let predictor = pairs.iter().map(|d| d.value).fold(f64::NAN, f64::max);
    let settled = gammas
        .iter()
        .filter(|g| missing.contains(&g.word))
        .all(|g| 1.0 / (g.length * table.cutoff) <= predictor);
    Ok(AsympPrediction { threshold, cutoff: table.cutoff, pairs, missing, predictor, settled })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    pub start: f64,
    pub step: f64,
    pub max: f64,
}

/// Raises the cutoff until the predictor is settled; returns it with the last table.
pub fn asymp_predictor_adaptive(
    h: &Holonomy,
    threshold: f64,
    policy: &CutoffPolicy,
    cfg: &EnumConfig,
) -> Result<(AsympPrediction, CurveTable)> {
    let mut c = policy.start;
    loop {
        let t = build_table(h, c, cfg)?;
        let p = asymp_predictor(h, &t, threshold)?;
        if p.settled || c >= policy.max {
            return Ok((p, t));
        }
        c = (c + policy.step).min(policy.max);
    }
}

/// One point of an asymptotic sweep over a parameter family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: f64,
    pub delta: f64,
    pub sys: f64,
    pub sys_h: f64,
    pub khat: f64,
    pub predictor: f64,
    /// predictor * 2(1 + delta) * sys_h * |log sys_h|
    pub normalized_product: f64,
    /// khat * 2 log n / n
    pub normalized_n: f64,
    pub cutoff: f64,
    /// khat is taken over curves up to the longest dual realizing the predictor.
    pub khat_cutoff: f64,
    pub certified: bool,
}

pub fn sweep_point(
    h: &Holonomy,
    n: f64,
    delta: f64,
    threshold: f64,
    policy: &CutoffPolicy,
    cfg: &EnumConfig,
) -> Result<SweepPoint> {
    let (pred, table) = asymp_predictor_adaptive(h, threshold, policy, cfg)?;
    let sys = systole(h, &table)?.length;
    let sys_h = homological_systole(h, &table)?.length;
    let kcut = pred.pairs.iter().filter(|q| q.value == pred.predictor).map(|q| q.len_alpha).fold(0.0, f64::max);
    let p = pairing_matrix(h)?;
    let khat = k_lower_bound_with(&p, &table.truncated(kcut))?.value;
    Ok(SweepPoint {
        n,
        delta,
        sys,
        sys_h,
        khat,
        predictor: pred.predictor,
        normalized_product: pred.predictor * 2.0 * (1.0 + delta) * sys_h * sys_h.ln().abs(),
        normalized_n: khat * 2.0 * n.ln() / n,
        cutoff: table.cutoff,
        khat_cutoff: kcut,
        certified: table.certified && pred.settled,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualBound {
    pub beta: CurveWord,
    pub len_beta: f64,
    /// l(beta) / (g (g + |log sys_h|)).
    pub ratio: f64,
}

pub fn dual_curve_bound_check(h: &Holonomy, table: &CurveTable, gamma: &CurveWord) -> Result<DualBound> {
    let p = pairing_matrix(h)?;
    let ge = table
        .entries
        .iter()
        .find(|e| &e.word == gamma)
        .ok_or_else(|| Error::Domain(format!("{gamma} is not in the table")))?;
    let sys_h = homological_systole(h, table)?.length;
    let beta = shortest_dual(h, &p, table, ge)?.ok_or_else(|| Error::NoDualFound(gamma.to_string()))?;
    let g = h.genus() as f64;
    Ok(DualBound {
        beta: beta.word,
        len_beta: beta.length,
        ratio: beta.length / (g * (g + sys_h.ln().abs())),
    })
}

/// Elementary divisors of an integer matrix (Smith normal form diagonal, nonzero part).
pub fn elementary_divisors(rows: &[Vec<i64>]) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, |r| r.len()));
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let piv = (t..nr)
            .flat_map(|i| (t..nc).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = piv else { break };
        m.swap(t, pi);
        for r in m.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nr {
            let q = m[i][t] / m[t][t];
            for j in t..nc {
                m[i][j] -= q * m[t][j];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..nc {
            let q = m[t][j] / m[t][t];
            for i in t..nr {
                m[i][j] -= q * m[i][t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot into its row.
        if let Some(i) = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| m[i][j] % m[t][t] != 0)) {
            for j in t..nc {
                let v = m[i][j];
                m[t][j] += v;
            }
            continue;
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// The rows span a direct summand of Z^n of full row rank.
pub fn is_primitive(rows: &[Vec<i64>]) -> bool {
    let d = elementary_divisors(rows);
    d.len() == rows.len() && d.iter().all(|&x| x == 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSearch {
    pub curves: Vec<(CurveWord, f64)>,
    /// Reference values 2^16 / min(sys_h, 1) * g * log(2g - k + 2) / (2g - k + 1), k = 1..2g.
    pub bound_values: Vec<f64>,
    pub det: i64,
}

/// Shortest-first greedy choice of 2g simple curves whose classes form a basis of H_1.
pub fn homology_basis_search(h: &Holonomy, table: &CurveTable) -> Result<BasisSearch> {
    let hb = HomologyBasis::new(&h.graph);
    let n = hb.rank();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut curves = Vec::new();
    for e in unoriented(table) {
        if rows.len() == n {
            break;
        }
        rows.push(e.homology.coords.clone());
        if is_primitive(&rows) {
            curves.push((e.word.clone(), e.length));
        } else {
            rows.pop();
        }
    }
    if rows.len() < n {
        return Err(Error::RankDeficient(rows.len(), n));
    }
    let det = crate::curves::PairingMatrix { p: rows }.det();
    let sys_h = homological_systole(h, table)?.length;
    let g = h.genus() as f64;
    let bound_values = (1..=n)
        .map(|k| {
            let r = (2.0 * g - k as f64 + 2.0).ln() / (2.0 * g - k as f64 + 1.0);
            65536.0 / sys_h.min(1.0) * g * r
        })
        .collect();
    Ok(BasisSearch { curves, bound_values, det })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurgeryRegime {
    /// Short curves below a1; pieces satisfy |Int(gamma, a')| = i(gamma, a').
    ShortCurves,
    /// Curves below the threshold; pieces meet each gamma at most once.
    CrossOnce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceCheck {
    pub piece: usize,
    pub gamma: usize,
    pub int: i64,
    pub geometric: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryWitness {
    pub alpha: CurveWord,
    pub alpha_length: f64,
    pub gammas: Vec<CurveWord>,
    pub regime: SurgeryRegime,
    pub pieces: Vec<CurveWord>,
    pub piece_lengths: Vec<f64>,
    pub homology_sum_ok: bool,
    pub total_length: f64,
    pub length_bound: f64,
    pub checks: Vec<PieceCheck>,
    pub subsets_examined: usize,
}

impl SurgeryWitness {
    /// Re-evaluates the recorded conditions.
    pub fn conditions_hold(&self) -> bool {
        let per_piece = self.checks.iter().all(|c| match self.regime {
            SurgeryRegime::ShortCurves => c.int.unsigned_abs() as usize == c.geometric,
            SurgeryRegime::CrossOnce => c.geometric <= 1,
        });
        self.homology_sum_ok && self.total_length <= self.length_bound + 1e-9 && per_piece
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryConfig {
    pub max_pieces: usize,
    pub max_subsets: usize,
}

impl Default for SurgeryConfig {
    fn default() -> Self {
        SurgeryConfig { max_pieces: 4, max_subsets: 5_000_000 }
    }
}

fn find_entry<'a>(table: &'a CurveTable, w: &CurveWord) -> Result<&'a CurveEntry> {
    table
        .entries
        .iter()
        .find(|e| &e.word == w)
        .ok_or_else(|| Error::Domain(format!("{w} is not in the table")))
}

/// Searches the table for a set of simple curves realizing the surgery lemma
/// conditions for `alpha` against `gammas`. Failure does not contradict the lemma:
/// witnesses may be longer than the cutoff or need more pieces.
pub fn surgery_witness_search(
    h: &Holonomy,
    table: &CurveTable,
    alpha: &CurveWord,
    gammas: &[CurveWord],
    regime: SurgeryRegime,
    cfg: &SurgeryConfig,
) -> Result<SurgeryWitness> {
    let p = pairing_matrix(h)?;
    let a = find_entry(table, alpha)?;
    let gs: Vec<&CurveEntry> = gammas.iter().map(|g| find_entry(table, g)).collect::<Result<_>>()?;
    let length_bound = match regime {
        SurgeryRegime::ShortCurves => {
            if let Some(g) = gs.iter().find(|g| g.length > A1) {
                return Err(Error::Domain(format!("{} is longer than a1", g.word)));
            }
            a.length
        }
        SurgeryRegime::CrossOnce => {
            let m = gs.iter().map(|g| g.length / g.length.ln().abs()).fold(0.0, f64::max);
            a.length * (1.0 + m)
        }
    };
    // Candidates satisfying the per-piece condition, shortest first.
    let pool: Vec<&CurveEntry> = table.simple().filter(|e| e.length <= length_bound + 1e-9).collect();
    let checked: Vec<Option<Vec<PieceCheck>>> = pool
        .par_iter()
        .map(|e| {
            let mut out = Vec::with_capacity(gs.len());
            for (k, g) in gs.iter().enumerate() {
                let geometric = entry_int(h, g, e)?;
                let int = algebraic_int(&g.homology, &e.homology, &p);
                let ok = match regime {
                    SurgeryRegime::ShortCurves => int.unsigned_abs() as usize == geometric,
                    SurgeryRegime::CrossOnce => geometric <= 1,
                };
                if !ok {
                    return Ok(None);
                }
                out.push(PieceCheck { piece: 0, gamma: k, int, geometric });
            }
            Ok(Some(out))
        })
        .collect::<Result<_>>()?;
    let cands: Vec<(&CurveEntry, Vec<PieceCheck>)> =
        pool.into_iter().zip(checked).filter_map(|(e, c)| c.map(|c| (e, c))).collect();

    let target = &a.homology;
    let mut examined = 0usize;
    let mut chosen: Vec<usize> = Vec::new();
    for size in 1..=cfg.max_pieces {
        if dfs(&cands, target, length_bound, size, 0, 0.0, &mut chosen, &mut examined, cfg.max_subsets) {
            let mut checks = Vec::new();
            for (k, &i) in chosen.iter().enumerate() {
                for c in &cands[i].1 {
                    checks.push(PieceCheck { piece: k, ..c.clone() });
                }
            }
            let sum = chosen
                .iter()
                .fold(HomologyClass::zero(target.coords.len()), |s, &i| s.add(&cands[i].0.homology));
            return Ok(SurgeryWitness {
                alpha: alpha.clone(),
                alpha_length: a.length,
                gammas: gammas.to_vec(),
                regime,
                pieces: chosen.iter().map(|&i| cands[i].0.word.clone()).collect(),
                piece_lengths: chosen.iter().map(|&i| cands[i].0.length).collect(),
                homology_sum_ok: &sum == target,
                total_length: chosen.iter().map(|&i| cands[i].0.length).sum(),
                length_bound,
                checks,
                subsets_examined: examined,
            });
        }
        if examined >= cfg.max_subsets {
            break;
        }
    }
    Err(Error::NotFound(examined))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    cands: &[(&CurveEntry, Vec<PieceCheck>)],
    target: &HomologyClass,
    bound: f64,
    size: usize,
    from: usize,
    len: f64,
    chosen: &mut Vec<usize>,
    examined: &mut usize,
    budget: usize,
) -> bool {
    if chosen.len() == size {
        *examined += 1;
        let sum = chosen
            .iter()
            .fold(HomologyClass::zero(target.coords.len()), |s, &i| s.add(&cands[i].0.homology));
        return &sum == target;
    }
    for i in from..cands.len() {
        if *examined >= budget {
            return false;
        }
        let l = len + cands[i].0.length;
        // Sorted by length: every later candidate overshoots too.
        if l > bound + 1e-9 {
            break;
        }
        chosen.push(i);
        if dfs(cands, target, bound, size, i + 1, l, chosen, examined, budget) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    /// Pants in each complementary component.
    pub components: Vec<Vec<usize>>,
    pub sides: Vec<Option<KEstimate>>,
    pub max_over_sides: f64,
    pub unrestricted: KEstimate,
}

/// K restricted to the curves living in each component of the complement of a
/// multicurve of separating pants curves.
pub fn side_restricted_k(h: &Holonomy, table: &CurveTable, multicurve: &[usize]) -> Result<SideReport> {
    let g = &h.graph;
    let bridges = g.bridges();
    for &e in multicurve {
        if e >= g.n_edges() || !bridges[e] {
            return Err(Error::Domain(format!("edge {e} is not a separating pants curve")));
        }
    }
    let cut: BTreeSet<usize> = multicurve.iter().copied().collect();
    // Union-find over pants through the uncut edges.
    let mut comp: Vec<usize> = (0..g.pants.len()).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for (e, [a, b]) in g.edges.iter().enumerate() {
        if !cut.contains(&e) {
            let (ra, rb) = (root(&mut comp, a.pants), root(&mut comp, b.pants));
            comp[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: Vec<usize> = (0..g.pants.len()).map(|p| root(&mut comp, p)).collect();
    let mut ids: Vec<usize> = roots.clone();
    ids.sort_unstable();
    ids.dedup();
    let components: Vec<Vec<usize>> =
        ids.iter().map(|&r| (0..g.pants.len()).filter(|&p| roots[p] == r).collect()).collect();

    let p = pairing_matrix(h)?;
    let mut buckets: Vec<Vec<&CurveEntry>> = vec![Vec::new(); components.len()];
    for e in table.simple() {
        if multicurve.iter().any(|&c| e.crossings[c] > 0) {
            continue;
        }
        let pants: BTreeSet<usize> = e.word.letters.iter().map(|l| roots[l.frames(g).0 .0]).collect();
        if pants.len() != 1 {
            return Err(Error::AmbiguousSide(e.word.to_string()));
        }
        let r = *pants.iter().next().expect("nonempty word");
        let k = ids.binary_search(&r).expect("known root");
        buckets[k].push(e);
    }
    let sides: Vec<Option<KEstimate>> =
        buckets.iter().map(|b| k_from_entries(b, &p, table.cutoff, table.certified)).collect();
    let max_over_sides = sides.iter().flatten().map(|k| k.value).fold(0.0, f64::max);
    let unrestricted = k_lower_bound_with(&p, table)?;
    Ok(SideReport { components, sides, max_over_sides, unrestricted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_holonomy, presets};

    #[test]
    fn smith_divisors() {
        assert_eq!(elementary_divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert!(is_primitive(&[vec![1, 0, 0], vec![0, 1, 1]]));
        assert!(!is_primitive(&[vec![2, 0], vec![0, 1]]));
        assert!(!is_primitive(&[vec![1, 1], vec![2, 2]]));
    }

    #[test]
    fn symmetric_surface_estimates() {
        let (g, x) = presets::symmetric_genus2();
        let h = build_holonomy(&g, &x).unwrap();
        let t = build_table(&h, 8.0, &EnumConfig::default()).unwrap();
        let s = systole(&h, &t).unwrap();
        assert!((s.length - 2.0).abs() < 1e-12);
        assert!(s.certified);
        let k = k_lower_bound(&h, &t).unwrap();
        assert!(k.value > 0.0);
        assert_eq!(k.int.abs(), 1);
        let sh = homological_systole(&h, &t).unwrap();
        assert!(k.value <= envelope(sh.length));
        let b = homology_basis_search(&h, &t).unwrap();
        assert_eq!(b.curves.len(), 4);
        assert_eq!(b.det.abs(), 1);
    }
}
