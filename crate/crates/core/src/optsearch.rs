//! Derivative-free search for surfaces with small K lower bound at fixed topology.
//!
//! Coordinates are (log l_e, t_e) per pants curve, with twists folded to [-1/2, 1/2).
//! Lengths are confined to a box; points outside it evaluate to +inf.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{build_table, pairing_matrix, EnumConfig, PairingMatrix};
use crate::error::Result;
use crate::estimator::{homological_systole, k_lower_bound_with, systole};
use crate::surface::{build_holonomy, FNCoordinates, PantsGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NelderMead,
    CoordinateDescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffRule {
    Fixed(f64),
    /// factor times the longest pants curve.
    MaxPantsLength(f64),
}

impl CutoffRule {
    pub fn cutoff(&self, x: &FNCoordinates) -> f64 {
        match *self {
            CutoffRule::Fixed(c) => c,
            CutoffRule::MaxPantsLength(f) => f * x.lengths.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub method: Method,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub budget: usize,
    pub cutoff: CutoffRule,
    /// Cutoff at which the best point is re-evaluated.
    pub confirm_cutoff: f64,
    pub initial_step: f64,
    pub min_length: f64,
    pub max_length: f64,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            method: Method::NelderMead,
            restarts: 2,
            budget: 150,
            cutoff: CutoffRule::MaxPantsLength(4.0),
            confirm_cutoff: 12.0,
            initial_step: 0.25,
            min_length: 0.02,
            max_length: 4.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub restart: usize,
    pub coords: FNCoordinates,
    pub khat: f64,
    pub sys: f64,
    pub sys_h: f64,
    pub cutoff: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub iterates: Vec<Iterate>,
    /// Index of the smallest khat among certified iterates.
    pub best: Option<usize>,
    pub config: OptConfig,
    /// khat of the best point at the confirmation cutoff.
    pub confirmed_khat: Option<f64>,
    /// Some restart ran out of evaluations before converging.
    pub budget_exhausted: bool,
}

impl SearchTrace {
    pub fn best_iterate(&self) -> Option<&Iterate> {
        self.best.map(|i| &self.iterates[i])
    }
}

/// Twist folded to [-1/2, 1/2).
pub fn fold_twist(t: f64) -> f64 {
    let f = t - t.round();
    if f >= 0.5 {
        f - 1.0
    } else {
        f
    }
}

fn to_coords(v: &[f64]) -> FNCoordinates {
    let n = v.len() / 2;
    FNCoordinates::new(v[..n].iter().map(|x| x.exp()).collect(), v[n..].iter().map(|&t| fold_twist(t)).collect())
}

fn to_vector(x: &FNCoordinates) -> Vec<f64> {
    x.lengths.iter().map(|l| l.ln()).chain(x.twists.iter().map(|&t| fold_twist(t))).collect()
}

struct Objective<'a> {
    g: &'a PantsGraph,
    p: PairingMatrix,
    cfg: &'a OptConfig,
    memo: Mutex<HashMap<Vec<u64>, Option<Iterate>>>,
}

impl Objective<'_> {
    fn key(x: &FNCoordinates) -> Vec<u64> {
        x.lengths.iter().chain(&x.twists).map(|v| v.to_bits()).collect()
    }

    fn eval_at(&self, x: &FNCoordinates, cutoff: f64) -> Result<Iterate> {
        let h = build_holonomy(self.g, x)?;
        let t = build_table(&h, cutoff, &EnumConfig::default())?;
        let k = k_lower_bound_with(&self.p, &t)?;
        Ok(Iterate {
            restart: 0,
            coords: x.clone(),
            khat: k.value,
            sys: systole(&h, &t)?.length,
            sys_h: homological_systole(&h, &t)?.length,
            cutoff,
            certified: t.certified,
        })
    }

    /// None outside the admissible box.
    fn eval(&self, v: &[f64]) -> Result<Option<Iterate>> {
        let x = to_coords(v);
        if x.lengths.iter().any(|&l| !(l >= self.cfg.min_length && l <= self.cfg.max_length)) {
            return Ok(None);
        }
        let key = Self::key(&x);
        if let Some(r) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(r.clone());
        }
        let r = Some(self.eval_at(&x, self.cfg.cutoff.cutoff(&x))?);
        self.memo.lock().expect("memo lock").insert(key, r.clone());
        Ok(r)
    }
}

fn value(it: &Option<Iterate>) -> f64 {
    it.as_ref().map_or(f64::INFINITY, |i| i.khat)
}

struct Run {
    trace: Vec<Iterate>,
    exhausted: bool,
}

fn record(run: &mut Run, it: &Option<Iterate>, restart: usize) {
    if let Some(i) = it {
        run.trace.push(Iterate { restart, ..i.clone() });
    }
}

fn nelder_mead(obj: &Objective, x0: Vec<f64>, restart: usize) -> Result<Run> {
    let n = x0.len();
    let step = obj.cfg.initial_step;
    let mut run = Run { trace: Vec::new(), exhausted: false };
    let evals = std::cell::Cell::new(0usize);
    let f = |v: &[f64], run: &mut Run| -> Result<f64> {
        evals.set(evals.get() + 1);
        let it = obj.eval(v)?;
        record(run, &it, restart);
        Ok(value(&it))
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = f(&x0, &mut run)?;
    simplex.push((x0.clone(), v0));
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += step;
        let v = f(&x, &mut run)?;
        simplex.push((x, v));
    }
    let budget = obj.cfg.budget;
    while evals.get() < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        let spread: f64 = (1..=n)
            .map(|i| simplex[i].0.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= 1e-9 * best.abs().max(1e-12) && spread < 1e-4 {
            return Ok(run);
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|s| s.0[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|j| centroid[j] + t * (simplex[n].0[j] - centroid[j])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr, &mut run)?;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe, &mut run)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(-0.5);
                let v = f(&x, &mut run)?;
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x, &mut run)?;
                (x, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = s.0.iter().zip(&x0).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    let v = f(&x, &mut run)?;
                    *s = (x, v);
                }
            }
        }
    }
    run.exhausted = true;
    Ok(run)
}

fn coordinate_descent(obj: &Objective, x0: Vec<f64>, restart: usize) -> Result<Run> {
    let mut run = Run { trace: Vec::new(), exhausted: false };
    let mut evals = 1usize;
    let first = obj.eval(&x0)?;
    record(&mut run, &first, restart);
    let (mut x, mut fx) = (x0, value(&first));
    let mut step = obj.cfg.initial_step;
    while step > 1e-3 {
        let mut improved = false;
        for j in 0..x.len() {
            for d in [step, -step] {
                if evals >= obj.cfg.budget {
                    run.exhausted = true;
                    return Ok(run);
                }
                let mut y = x.clone();
                y[j] += d;
                evals += 1;
                let it = obj.eval(&y)?;
                record(&mut run, &it, restart);
                if value(&it) < fx {
                    (x, fx) = (y, value(&it));
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(run)
}

/// Minimizes the K lower bound starting from `init` and from seeded perturbations of it.
pub fn minimize_k(g: &PantsGraph, init: &FNCoordinates, cfg: &OptConfig) -> Result<SearchTrace> {
    init.validate(g)?;
    let h0 = build_holonomy(g, init)?;
    let obj = Objective { g, p: pairing_matrix(&h0)?, cfg, memo: Mutex::new(HashMap::new()) };
    let x0 = to_vector(init);
    let starts: Vec<Vec<f64>> = (0..cfg.restarts.max(1))
        .map(|r| {
            if r == 0 {
                return x0.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
            x0.iter().map(|v| v + rng.gen_range(-0.3..0.3)).collect()
        })
        .collect();
    let runs: Vec<Run> = starts
        .into_par_iter()
        .enumerate()
        .map(|(r, s)| match cfg.method {
            Method::NelderMead => nelder_mead(&obj, s, r),
            Method::CoordinateDescent => coordinate_descent(&obj, s, r),
        })
        .collect::<Result<_>>()?;
    let budget_exhausted = runs.iter().any(|r| r.exhausted);
    let iterates: Vec<Iterate> = runs.into_iter().flat_map(|r| r.trace).collect();
    let best = iterates
        .iter()
        .enumerate()
        .filter(|(_, it)| it.certified)
        .min_by(|a, b| a.1.khat.total_cmp(&b.1.khat).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i);
    let confirmed_khat = match best {
        Some(i) => Some(obj.eval_at(&iterates[i].coords, cfg.confirm_cutoff)?.khat),
        None => None,
    };
    Ok(SearchTrace { iterates, best, config: cfg.clone(), confirmed_khat, budget_exhausted })
}
