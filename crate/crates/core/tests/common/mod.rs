#![allow(dead_code)]

use kform_core::surface::{presets, FNCoordinates, PantsGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Lengths uniform in [lo, hi], twists uniform in [-1/2, 1/2).
pub fn random_coords(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> FNCoordinates {
    FNCoordinates::new((0..n).map(|_| r.gen_range(lo..=hi)).collect(), (0..n).map(|_| r.gen_range(-0.5..0.5)).collect())
}

pub fn genus2_graphs() -> [PantsGraph; 2] {
    [presets::theta_graph(), presets::dumbbell_graph()]
}

pub fn genus3_graphs() -> [PantsGraph; 2] {
    [presets::genus3_graph(), presets::genus3_separating_graph()]
}
