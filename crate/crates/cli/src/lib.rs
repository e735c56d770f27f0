//! Library half of the `kform` command: file formats, presets, caching and the
//! invariant suites behind `kform verify`.

pub mod cache;
pub mod presets;
pub mod surface_file;
pub mod verify;

/// Reals in CSV output: 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}
