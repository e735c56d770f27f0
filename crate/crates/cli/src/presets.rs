//! Named surfaces available on the command line.

use kform_core::surface::{presets, FNCoordinates};

use crate::surface_file::SurfaceFile;

pub const NAMES: &[&str] = &["symmetric-genus2", "dumbbell", "fig5", "fig5-example1", "fig5-example63", "thin-family", "separating-thin-family", "pinched-genus2"];

/// `delta` and `n` parametrize the genus-three families; `fig5` is an alias of
/// `fig5-example1`. `pinched-genus2` has one pants curve at length `pinch`.
pub fn preset(name: &str, delta: f64, n: f64, pinch: f64) -> Option<SurfaceFile> {
    let (label, (g, x)) = match name {
        "symmetric-genus2" => ("symmetric genus 2".to_string(), presets::symmetric_genus2()),
        "dumbbell" => ("dumbbell".to_string(), (presets::dumbbell_graph(), FNCoordinates::new(vec![2.0; 3], vec![0.0; 3]))),
        "fig5" | "fig5-example1" | "thin-family" => (format!("genus 3, thin curves, delta={delta} n={n}"), presets::thin_family(delta, n)),
        "fig5-example63" | "separating-thin-family" => (format!("genus 3, separating thin curve, n={n}"), presets::separating_thin_family(n)),
        "pinched-genus2" => {
            let (g, mut x) = presets::symmetric_genus2();
            x.lengths[1] = pinch;
            (format!("genus 2 pinched to {pinch}"), (g, x))
        }
        _ => return None,
    };
    Some(SurfaceFile::new(Some(label), g, x))
}
