//! First homology in a basis adapted to the pants decomposition.
//!
//! For each edge e_k outside the spanning tree there are two coordinates: the
//! pairing of the boundary-loop content with the fundamental cycle of e_k, and the
//! signed number of crossings of e_k. The basis loops x_{e_k}, y_{e_k} map to unit
//! vectors, so the map from words is a surjection onto Z^{2g} and hence an
//! isomorphism from H_1.

use serde::{Deserialize, Serialize};

use super::intersect::geometric_int_signed;
use super::word::{CurveWord, Letter};
use crate::error::{Error, Result};
use crate::surface::{build_holonomy, FNCoordinates, Holonomy, PantsGraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyClass {
    pub coords: Vec<i64>,
}

impl HomologyClass {
    pub fn zero(rank: usize) -> Self {
        HomologyClass { coords: vec![0; rank] }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coords[i] = 1;
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        HomologyClass { coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &HomologyClass) -> Self {
        HomologyClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        HomologyClass { coords: self.coords.iter().map(|x| k * x).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyBasis {
    /// Edges outside the spanning tree, in index order.
    pub nontree: Vec<usize>,
    /// Signed edge vector of the fundamental cycle of each non-tree edge.
    pub cycles: Vec<Vec<i64>>,
    /// Sign of each (pants, slot) endpoint: +1 for endpoint A, -1 for B.
    pub signs: Vec<[i64; 3]>,
    /// Edge at each (pants, slot).
    pub slots: Vec<[usize; 3]>,
    pub n_edges: usize,
}

impl HomologyBasis {
    pub fn new(g: &PantsGraph) -> Self {
        let tree = g.spanning_tree();
        let nontree: Vec<usize> = (0..g.n_edges()).filter(|&e| !tree.in_tree[e]).collect();
        let cycles = nontree
            .iter()
            .map(|&e| {
                let [a, b] = g.edges[e];
                let mut z = vec![0i64; g.n_edges()];
                z[e] += 1;
                for l in g.tree_path(&tree, b.pants, a.pants) {
                    if let Letter::Cross { edge, fwd } = l {
                        z[edge as usize] += if fwd { 1 } else { -1 };
                    }
                }
                z
            })
            .collect();
        let signs = (0..g.pants.len()).map(|p| [0, 1, 2].map(|s| g.endpoint_sign(p, s))).collect();
        HomologyBasis { nontree, cycles, signs, slots: g.pants.clone(), n_edges: g.n_edges() }
    }

    pub fn rank(&self) -> usize {
        2 * self.nontree.len()
    }

    /// Position of the (x, y) coordinates of a non-tree edge.
    pub fn index_of(&self, e: usize) -> Option<usize> {
        self.nontree.iter().position(|&x| x == e).map(|k| 2 * k)
    }

    /// Exponent-sum class of a closed word.
    pub fn abelianize(&self, w: &CurveWord) -> HomologyClass {
        let n_edges = self.n_edges;
        let mut u = vec![0i64; n_edges];
        let mut c = vec![0i64; n_edges];
        for l in &w.letters {
            match *l {
                Letter::Loop { pants, slot, pow } => {
                    let (p, s) = (pants as usize, slot as usize);
                    u[self.slots[p][s]] += pow as i64 * self.signs[p][s];
                }
                Letter::Cross { edge, fwd } => c[edge as usize] += if fwd { 1 } else { -1 },
            }
        }
        let mut coords = Vec::with_capacity(self.rank());
        for (k, &e) in self.nontree.iter().enumerate() {
            coords.push(self.cycles[k].iter().zip(&u).map(|(z, x)| z * x).sum());
            coords.push(c[e]);
        }
        HomologyClass { coords }
    }
}

/// Homological criterion; meaningful for simple curves only.
pub fn is_nonseparating(hb: &HomologyBasis, w: &CurveWord) -> bool {
    !hb.abelianize(w).is_zero()
}

/// Bilinear form a^T P b.
pub fn algebraic_int(a: &HomologyClass, b: &HomologyClass, p: &PairingMatrix) -> i64 {
    let n = p.rank();
    let mut s = 0;
    for i in 0..n {
        if a.coords[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += a.coords[i] * p.p[i][j] * b.coords[j];
        }
    }
    s
}

/// The basis loop with index i: x or y of the corresponding non-tree edge.
pub fn basis_loop(h: &Holonomy, hb: &HomologyBasis, i: usize) -> CurveWord {
    let e = hb.nontree[i / 2];
    if i % 2 == 0 {
        h.x_words[e].clone()
    } else {
        h.y_words[e].clone().expect("non-tree edges are nonseparating")
    }
}

/// Signed intersections of the basis loops, computed geometrically on a fixed
/// reference metric of the same pants graph (the pairing is topological).
pub fn pairing_matrix(h: &Holonomy) -> Result<PairingMatrix> {
    let g = &h.graph;
    let n = g.n_edges();
    let reference = FNCoordinates::new(vec![2.0; n], (0..n).map(|e| 0.1 + 0.05 * e as f64).collect());
    let r = build_holonomy(g, &reference)?;
    let hb = HomologyBasis::new(g);
    let m = hb.rank();
    let loops: Vec<CurveWord> = (0..m).map(|i| basis_loop(&r, &hb, i)).collect();
    let mut p = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let s: i64 = geometric_int_signed(&r, &loops[i], &loops[j])?.iter().map(|c| c.sign as i64).sum();
            p[i][j] = s;
            p[j][i] = -s;
        }
    }
    let pm = PairingMatrix { p };
    let d = pm.det();
    if d.abs() != 1 {
        return Err(Error::DegenerateBasis(d));
    }
    Ok(pm)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingMatrix {
    pub p: Vec<Vec<i64>>,
}

impl PairingMatrix {
    pub fn rank(&self) -> usize {
        self.p.len()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.p[i][j] == -self.p[j][i]))
    }

    /// Exact integer determinant (Bareiss elimination).
    pub fn det(&self) -> i64 {
        let n = self.rank();
        let mut m: Vec<Vec<i128>> = self.p.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * m[n - 1][n - 1]) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::presets;

    #[test]
    fn theta_graph_basis() {
        let g = presets::theta_graph();
        let hb = HomologyBasis::new(&g);
        assert_eq!(hb.nontree, vec![1, 2]);
        assert_eq!(hb.rank(), 4);
        let x1: CurveWord = "p0.1^1".parse().unwrap();
        assert_eq!(hb.abelianize(&x1).coords, vec![1, 0, 0, 0]);
        // The same curve seen from the other pants is reversed.
        let x1b: CurveWord = "p1.1^1".parse().unwrap();
        assert_eq!(hb.abelianize(&x1b).coords, vec![-1, 0, 0, 0]);
        // Edge 0 is in the tree: x_0 = -(x_1 + x_2) in homology.
        let x0: CurveWord = "p0.0^1".parse().unwrap();
        assert_eq!(hb.abelianize(&x0).coords, vec![-1, 0, -1, 0]);
        let y2: CurveWord = "e2> e0<".parse().unwrap();
        assert_eq!(hb.abelianize(&y2).coords, vec![0, 0, 0, 1]);
    }

    #[test]
    fn commutator_and_inverse() {
        let g = presets::theta_graph();
        let hb = HomologyBasis::new(&g);
        let w: CurveWord = "p0.1^1 e1> e0< p0.1^-1 e0> e1<".parse().unwrap();
        assert!(hb.abelianize(&w).is_zero());
        let v: CurveWord = "p0.1^2 e1> p1.2^-1 e0<".parse().unwrap();
        assert_eq!(hb.abelianize(&v.inverse()), hb.abelianize(&v).neg());
    }

    #[test]
    fn pants_relation_is_null() {
        let g = presets::genus3_graph();
        let hb = HomologyBasis::new(&g);
        for p in 0..g.pants.len() {
            let w: CurveWord = format!("p{p}.2^1 p{p}.1^1 p{p}.0^1").parse().unwrap();
            assert!(hb.abelianize(&w).is_zero());
        }
    }

    #[test]
    fn pairing_is_unimodular_and_symplectic_on_presets() {
        for g in [presets::theta_graph(), presets::dumbbell_graph(), presets::genus3_graph(), presets::genus3_separating_graph()] {
            let n = g.n_edges();
            let h = build_holonomy(&g, &FNCoordinates::new(vec![1.0; n], vec![0.0; n])).unwrap();
            let p = pairing_matrix(&h).unwrap();
            assert!(p.is_antisymmetric());
            assert_eq!(p.det().abs(), 1);
            for k in 0..p.rank() / 2 {
                assert_eq!(p.p[2 * k][2 * k + 1].abs(), 1);
            }
        }
    }

    #[test]
    fn separating_test() {
        let g = presets::genus3_separating_graph();
        let hb = HomologyBasis::new(&g);
        let h = build_holonomy(&g, &FNCoordinates::new(vec![1.0; 6], vec![0.0; 6])).unwrap();
        assert!(!is_nonseparating(&hb, &h.x_words[1]));
        assert!(is_nonseparating(&hb, &h.x_words[0]));
        let y = h.y_words[0].clone().unwrap();
        assert!(is_nonseparating(&hb, &y));
    }

    #[test]
    fn determinant() {
        let p = PairingMatrix { p: vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]] };
        assert_eq!(p.det(), 1);
        assert!(p.is_antisymmetric());
        let q = PairingMatrix { p: vec![vec![0, 2], vec![-2, 0]] };
        assert_eq!(q.det(), 4);
    }
}
