//! Invariant suites run by `kform verify`.

use kform_core::curves::{
    algebraic_int, build_table, geometric_int_signed, pairing_matrix, CurveEntry, EnumConfig,
};
use kform_core::deform::{auxiliary_surface, check_auxiliary_bounds};
use kform_core::hyptrig::{collar_half_width, perp_distinct, perp_same, A1};
use kform_core::moebius::{translation, Isometry, Mat2};
use kform_core::surface::{build_holonomy, validate, word_length};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::presets::preset;
use crate::surface_file::SurfaceFile;

pub const SUITES: &[&str] = &["trig", "moebius", "holonomy", "curves", "lemma33", "auxiliary", "all"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub suite: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub suite: String,
    pub key: String,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub suites: Vec<String>,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<Note>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, suite: &str, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure { suite: suite.into(), check: name.into(), detail: detail() });
        }
    }

    fn note(&mut self, suite: &str, key: &str, value: f64) {
        self.notes.push(Note { suite: suite.into(), key: key.into(), value });
    }
}

pub struct Options<'a> {
    pub surface: Option<&'a SurfaceFile>,
    /// Matrices to check in the moebius suite, one `a b c d` per entry.
    pub fixture: Option<&'a [Mat2]>,
    pub cutoff: f64,
    pub seed: u64,
}

pub fn parse_fixture(text: &str) -> Result<Vec<Mat2>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: Vec<f64> = body
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        let [a, b, c, d] = v[..] else { return Err(format!("line {}: expected four entries", i + 1)) };
        out.push(Mat2::new(a, b, c, d));
    }
    Ok(out)
}

pub fn run(suite: &str, opts: &Options) -> Report {
    let mut r = Report::default();
    let all = suite == "all";
    if all || suite == "trig" {
        trig(&mut r);
    }
    if all || suite == "moebius" {
        moebius(&mut r, opts);
    }
    if all || suite == "holonomy" {
        holonomy(&mut r, opts);
    }
    if all || suite == "curves" {
        curves(&mut r, opts);
    }
    if all || suite == "lemma33" || suite == "auxiliary" {
        lemma33(&mut r, opts);
    }
    r
}

fn trig(r: &mut Report) {
    const S: &str = "trig";
    r.suites.push(S.into());
    // Collar width dominates |log x| >= sqrt 2 below a1.
    for k in 0..1000 {
        let x = A1 * (1e-12f64 / A1).powf(1.0 - k as f64 / 1000.0);
        let w = collar_half_width(x).unwrap_or(f64::NAN);
        r.check(S, "collar-width-chain", w >= x.ln().abs() && x.ln().abs() >= 2f64.sqrt(), || format!("x = {x}"));
    }
    // Right-angled hexagon symmetry and the degenerate case l1 = l2.
    for &(a, b, c) in &[(1.0, 2.0, 3.0), (0.1, 0.5, 2.5), (2.0, 2.0, 2.0)] {
        let p = perp_distinct(a, b, c).unwrap_or(f64::NAN);
        let q = perp_distinct(b, a, c).unwrap_or(f64::NAN);
        r.check(S, "perp-symmetry", (p - q).abs() <= 1e-12 * p.abs().max(1.0), || format!("{p} vs {q}"));
    }
    let eta = perp_distinct(2.0, 2.0, 2.0).unwrap_or(f64::NAN);
    let same = perp_same(2.0, 2.0, eta).unwrap_or(f64::NAN);
    r.check(S, "perp-same-finite", same.is_finite() && same > 0.0, || format!("{same}"));
}

fn moebius(r: &mut Report, opts: &Options) {
    const S: &str = "moebius";
    r.suites.push(S.into());
    if let Some(fx) = opts.fixture {
        for (i, m) in fx.iter().enumerate() {
            let ok = Isometry::new(*m).is_ok();
            r.check(S, "determinant", ok, || format!("fixture matrix {i} has determinant {}", m.det()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..200 {
        let d1: f64 = rng.gen_range(-3.0..3.0);
        let d2: f64 = rng.gen_range(-3.0..3.0);
        let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let a = translation(d1).mul(&kform_core::moebius::rotation(th)).mul(&translation(d2));
        r.check(S, "unit-determinant", (a.det() - 1.0).abs() < 1e-9 * a.norm2().max(1.0), || format!("{a:?}"));
        let id = a.mul(&a.inv());
        r.check(S, "inverse", id.approx_eq(&Mat2::IDENTITY, 1e-9 * a.norm2()), || format!("{id:?}"));
        let t = translation(d1);
        r.check(S, "translation-length", (t.displacement() - d1.abs()).abs() < 1e-9, || format!("{d1}"));
    }
}

fn surface_or_default(opts: &Options) -> SurfaceFile {
    opts.surface.cloned().unwrap_or_else(|| preset("symmetric-genus2", 0.0, 1.0, 1.0).expect("known preset"))
}

fn holonomy(r: &mut Report, opts: &Options) {
    const S: &str = "holonomy";
    r.suites.push(S.into());
    let sf = surface_or_default(opts);
    let h = match build_holonomy(&sf.graph, &sf.coords) {
        Ok(h) => h,
        Err(e) => return r.check(S, "build", false, || e.to_string()),
    };
    let v = validate(&h);
    r.check(S, "validate", v.ok(), || v.defects.join("; "));
    for (e, w) in h.x_words.iter().enumerate() {
        let l = word_length(&h, w).unwrap_or(f64::NAN);
        let want = sf.coords.lengths[e];
        r.check(S, "pants-length", (l - want).abs() <= 1e-9 * want, || format!("edge {e}: {l} vs {want}"));
    }
}

fn curves(r: &mut Report, opts: &Options) {
    const S: &str = "curves";
    r.suites.push(S.into());
    let sf = surface_or_default(opts);
    let run = |r: &mut Report| -> kform_core::Result<()> {
        let h = build_holonomy(&sf.graph, &sf.coords)?;
        let p = pairing_matrix(&h)?;
        r.check(S, "pairing-antisymmetric", p.is_antisymmetric(), || format!("{:?}", p.p));
        r.check(S, "pairing-unimodular", p.det().abs() == 1, || format!("det {}", p.det()));
        let t = build_table(&h, opts.cutoff, &EnumConfig::default())?;
        let simple: Vec<&CurveEntry> = t.simple().filter(|e| e.word <= e.word.inverse().canonical()).take(40).collect();
        for (i, a) in simple.iter().enumerate() {
            for b in &simple[i + 1..] {
                let signed = match geometric_int_signed(&h, &a.word, &b.word) {
                    Ok(s) => s,
                    Err(kform_core::Error::SharedGeodesic) => continue,
                    Err(e) => return Err(e),
                };
                let sum: i64 = signed.iter().map(|c| c.sign as i64).sum();
                let alg = algebraic_int(&a.homology, &b.homology, &p);
                r.check(S, "signed-count-matches-homology", sum == alg, || {
                    format!("{} vs {}: {sum} vs {alg}", a.word, b.word)
                });
                r.check(S, "algebraic-below-geometric", alg.unsigned_abs() as usize <= signed.len(), || {
                    format!("{} vs {}", a.word, b.word)
                });
            }
        }
        r.note(S, "table-size", t.len() as f64);
        Ok(())
    };
    if let Err(e) = run(r) {
        r.check(S, "run", false, || e.to_string());
    }
}

fn lemma33(r: &mut Report, opts: &Options) {
    const S: &str = "lemma33";
    r.suites.push(S.into());
    let sf = opts
        .surface
        .filter(|s| s.coords.lengths.iter().any(|&l| l < A1))
        .cloned()
        .unwrap_or_else(|| preset("pinched-genus2", 0.0, 1.0, 1e-3).expect("known preset"));
    let y = auxiliary_surface(&sf.graph, &sf.coords);
    // Curves crossing the short curve are at least twice its collar width long.
    let sys = sf.coords.lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = opts.cutoff.max(2.0 * collar_half_width(sys).unwrap_or(0.0) + 4.0);
    match check_auxiliary_bounds(&sf.graph, &sf.coords, &y, cutoff) {
        Ok(rep) => {
            r.check(S, "crossing-curves-present", rep.crossing_rows().next().is_some(), || {
                format!("no curve crosses a short curve below cutoff {cutoff}")
            });
            r.check(S, "sys-y-is-a1", (rep.sys_y - A1).abs() <= 1e-8, || format!("sys(Y) = {}", rep.sys_y));
            r.check(S, "disjoint-not-longer", rep.max_disjoint_ratio <= 1.0 + 1e-9, || {
                format!("ratio {}", rep.max_disjoint_ratio)
            });
            r.note(S, "R", rep.r);
            r.note(S, "curves", rep.rows.len() as f64);
            r.note(S, "cutoff", cutoff);
        }
        Err(e) => r.check(S, "auxiliary-bounds", false, || e.to_string()),
    }
}
