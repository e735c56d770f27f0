//! Curve words: closed paths in the pants groupoid.
//!
//! A word is a cyclic sequence of letters. `Loop` winds around a boundary of a pants
//! (the boundary element of that pants, to a power); `Cross` passes through a pants
//! curve from endpoint A to endpoint B (`fwd`) or back. Consecutive letters must be
//! composable: a letter starts in the pants where the previous one ended.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::PantsGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    Cross { edge: u16, fwd: bool },
    Loop { pants: u16, slot: u8, pow: i32 },
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::Cross { edge, fwd } => Letter::Cross { edge, fwd: !fwd },
            Letter::Loop { pants, slot, pow } => Letter::Loop { pants, slot, pow: -pow },
        }
    }

    /// (pants, slot) where the letter starts and where it ends.
    pub fn frames(self, g: &PantsGraph) -> ((usize, usize), (usize, usize)) {
        match self {
            Letter::Loop { pants, slot, .. } => ((pants as usize, slot as usize), (pants as usize, slot as usize)),
            Letter::Cross { edge, fwd } => {
                let [a, b] = g.edges[edge as usize];
                if fwd {
                    ((a.pants, a.slot), (b.pants, b.slot))
                } else {
                    ((b.pants, b.slot), (a.pants, a.slot))
                }
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::Cross { edge, fwd } => write!(f, "e{}{}", edge, if fwd { '>' } else { '<' }),
            Letter::Loop { pants, slot, pow } => write!(f, "p{}.{}^{}", pants, slot, pow),
        }
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let bad = || Error::InvalidWord(format!("bad letter '{s}'"));
        if let Some(rest) = s.strip_prefix('e') {
            let (num, dir) = rest.split_at(rest.len().saturating_sub(1));
            let edge = num.parse().map_err(|_| bad())?;
            let fwd = match dir {
                ">" => true,
                "<" => false,
                _ => return Err(bad()),
            };
            Ok(Letter::Cross { edge, fwd })
        } else if let Some(rest) = s.strip_prefix('p') {
            let (ps, pw) = rest.split_once('^').ok_or_else(bad)?;
            let (p, sl) = ps.split_once('.').ok_or_else(bad)?;
            let slot: u8 = sl.parse().map_err(|_| bad())?;
            if slot > 2 {
                return Err(bad());
            }
            Ok(Letter::Loop { pants: p.parse().map_err(|_| bad())?, slot, pow: pw.parse().map_err(|_| bad())? })
        } else {
            Err(bad())
        }
    }
}

/// Serialized as its text form, e.g. `"e0< e1> p1.0^1"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CurveWord {
    pub letters: Vec<Letter>,
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for CurveWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<CurveWord> {
        let letters = s.split_whitespace().map(|t| t.parse()).collect::<Result<Vec<Letter>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        Ok(CurveWord { letters })
    }
}

impl From<CurveWord> for String {
    fn from(w: CurveWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for CurveWord {
    type Error = Error;

    fn try_from(s: String) -> Result<CurveWord> {
        s.parse()
    }
}

impl CurveWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        CurveWord { letters }
    }

    /// The boundary loop of pants `p` at `slot`, once around.
    pub fn boundary(p: usize, slot: usize) -> Self {
        CurveWord { letters: vec![Letter::Loop { pants: p as u16, slot: slot as u8, pow: 1 }] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> CurveWord {
        CurveWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn rotated(&self, k: usize) -> CurveWord {
        let n = self.letters.len();
        CurveWord { letters: (0..n).map(|i| self.letters[(i + k) % n]).collect() }
    }

    pub fn concat(&self, o: &CurveWord) -> CurveWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&o.letters);
        CurveWord { letters }
    }

    /// Number of crossings of each edge.
    pub fn crossing_counts(&self, n_edges: usize) -> Vec<u32> {
        let mut m = vec![0u32; n_edges];
        for l in &self.letters {
            if let Letter::Cross { edge, .. } = l {
                m[*edge as usize] += 1;
            }
        }
        m
    }

    pub fn crossings(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, Letter::Cross { .. })).count()
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> CurveWord {
        let n = self.letters.len();
        let best = (0..n)
            .min_by(|&i, &j| {
                for k in 0..n {
                    let c = self.letters[(i + k) % n].cmp(&self.letters[(j + k) % n]);
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
            .unwrap_or(0);
        self.rotated(best)
    }

    /// Checks the letters compose to a closed path; returns the starting pants.
    pub fn check_closed(&self, g: &PantsGraph) -> Result<usize> {
        if self.letters.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        for l in &self.letters {
            match *l {
                Letter::Cross { edge, .. } if edge as usize >= g.edges.len() => {
                    return Err(Error::InvalidWord(format!("edge {edge} out of range")))
                }
                Letter::Loop { pants, slot, .. } if pants as usize >= g.pants.len() || slot > 2 => {
                    return Err(Error::InvalidWord(format!("pants {pants} slot {slot} out of range")))
                }
                _ => {}
            }
        }
        let n = self.letters.len();
        for i in 0..n {
            let (_, (p_out, _)) = self.letters[i].frames(g);
            let ((p_in, _), _) = self.letters[(i + 1) % n].frames(g);
            if p_out != p_in {
                return Err(Error::InvalidWord(format!(
                    "letter {} ends in pants {} but letter {} starts in pants {}",
                    self.letters[i],
                    p_out,
                    self.letters[(i + 1) % n],
                    p_in
                )));
            }
        }
        Ok(self.letters[0].frames(g).0 .0)
    }

    /// Free and cyclic reduction in the pants groupoid.
    ///
    /// Merges powers of the same boundary, removes zero powers, cancels immediate
    /// back-and-forth crossings and collapses `cross, boundary^k, cross back` to a power of
    /// the boundary on the near side. Runs of boundary letters that reduce to the identity
    /// through the pants relation are dropped.
    pub fn reduced(&self, g: &PantsGraph) -> CurveWord {
        let mut v = self.letters.clone();
        loop {
            let before = v.clone();
            v = reduce_linear(&v, g);
            // Cyclic: rotate so that a reduction across the seam becomes linear.
            if v.len() > 1 {
                let k = v.len() / 2;
                v.rotate_left(k);
                v = reduce_linear(&v, g);
            }
            // Every reduction step shortens the word; rotation alone does not.
            if v.len() == before.len() {
                break;
            }
        }
        CurveWord { letters: v }
    }
}

/// Free-group element of a pants group in the basis h0, h1 (h2 = h0^-1 h1^-1).
fn pants_free_word(run: &[Letter]) -> Vec<i8> {
    // Letters encoded as +1 = h0, -1 = h0^-1, +2 = h1, -2 = h1^-1.
    let mut out: Vec<i8> = Vec::new();
    let push = |x: i8, out: &mut Vec<i8>| {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    };
    for l in run {
        if let Letter::Loop { slot, pow, .. } = *l {
            let unit: Vec<i8> = match (slot, pow > 0) {
                (0, true) => vec![1],
                (0, false) => vec![-1],
                (1, true) => vec![2],
                (1, false) => vec![-2],
                (_, true) => vec![-1, -2],
                (_, false) => vec![2, 1],
            };
            for _ in 0..pow.unsigned_abs() {
                for &x in &unit {
                    push(x, &mut out);
                }
            }
        }
    }
    out
}

/// If the run equals h_slot^k in the pants group, returns k.
fn run_as_power(run: &[Letter], slot: usize) -> Option<i32> {
    let w = pants_free_word(run);
    if w.is_empty() {
        return Some(0);
    }
    let probe = |k: i32| -> bool {
        let l = Letter::Loop { pants: 0, slot: slot as u8, pow: k };
        pants_free_word(&[l]) == w
    };
    let unit = if slot == 2 { 2 } else { 1 };
    let k = (w.len() / unit) as i32;
    if probe(k) {
        Some(k)
    } else if probe(-k) {
        Some(-k)
    } else {
        None
    }
}

fn reduce_linear(v: &[Letter], g: &PantsGraph) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(v.len());
    for &l in v {
        match l {
            Letter::Loop { pow: 0, .. } => {}
            Letter::Loop { pants, slot, pow } => {
                if let Some(Letter::Loop { pants: p2, slot: s2, pow: q }) = out.last().copied() {
                    if p2 == pants && s2 == slot {
                        out.pop();
                        if q + pow != 0 {
                            out.push(Letter::Loop { pants, slot, pow: q + pow });
                        }
                        continue;
                    }
                }
                out.push(l);
            }
            Letter::Cross { edge, fwd } => {
                // Find the run of boundary letters since the last crossing.
                let start = out.iter().rposition(|x| matches!(x, Letter::Cross { .. }));
                if let Some(si) = start {
                    if out[si] == (Letter::Cross { edge, fwd: !fwd }) {
                        let ((_, _), (_, arr_slot)) = out[si].frames(g);
                        let run = &out[si + 1..];
                        if let Some(k) = run_as_power(run, arr_slot) {
                            let ((dep_p, dep_s), _) = out[si].frames(g);
                            out.truncate(si);
                            if k != 0 {
                                let nl = Letter::Loop { pants: dep_p as u16, slot: dep_s as u8, pow: -k };
                                // Merge with a preceding power of the same boundary.
                                if let Some(Letter::Loop { pants: p2, slot: s2, pow: q }) = out.last().copied() {
                                    if p2 as usize == dep_p && s2 as usize == dep_s {
                                        out.pop();
                                        if q - k != 0 {
                                            out.push(Letter::Loop { pants: p2, slot: s2, pow: q - k });
                                        }
                                        continue;
                                    }
                                }
                                out.push(nl);
                            }
                            continue;
                        }
                    }
                }
                out.push(l);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::presets;

    #[test]
    fn text_round_trip() {
        let w: CurveWord = "e0> p1.2^-3 e2< p0.1^1".parse().unwrap();
        assert_eq!(w.to_string().parse::<CurveWord>().unwrap(), w);
        assert!("e0".parse::<CurveWord>().is_err());
        assert!("p0.3^1".parse::<CurveWord>().is_err());
    }

    #[test]
    fn backtrack_collapses() {
        let g = presets::theta_graph();
        // Cross e0 into pants 1, wind twice at the arrival boundary, come back.
        let w: CurveWord = "p0.0^1 e0> p1.0^2 e0<".parse().unwrap();
        let r = w.reduced(&g);
        assert_eq!(r.to_string(), "p0.0^-1");
    }

    #[test]
    fn inverse_is_involution() {
        let w: CurveWord = "e0> p1.2^-3 e2< p0.1^1".parse().unwrap();
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn pants_relation_collapses() {
        let g = presets::theta_graph();
        let w: CurveWord = "e0> p1.2^1 p1.1^1 p1.0^1 e0< p0.1^1".parse().unwrap();
        assert_eq!(w.reduced(&g).to_string(), "p0.1^1");
    }
}
