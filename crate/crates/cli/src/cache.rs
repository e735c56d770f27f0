//! On-disk cache of curve tables keyed by surface and enumeration settings.

use std::fs;
use std::path::{Path, PathBuf};

use kform_core::curves::{build_table, CurveTable, EnumConfig};
use kform_core::surface::Holonomy;
use sha2::{Digest, Sha256};

use crate::surface_file::SurfaceFile;

pub const HEADER: &str = "kform-curve-table 1";

pub fn key(sf: &SurfaceFile, cutoff: f64, cfg: &EnumConfig) -> String {
    let mut h = Sha256::new();
    // The label does not affect the table.
    let unlabeled = SurfaceFile { label: None, ..sf.clone() };
    h.update(unlabeled.emit().as_bytes());
    h.update(format!("cutoff {:016x}\n", cutoff.to_bits()).as_bytes());
    h.update(serde_json::to_string(cfg).expect("config serializes").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.table"))
}

fn read(p: &Path) -> Option<CurveTable> {
    let text = fs::read_to_string(p).ok()?;
    let (head, body) = text.split_once('\n')?;
    if head != HEADER {
        return None;
    }
    serde_json::from_str(body).ok()
}

/// Loads the table from the cache directory if present, otherwise builds and stores it.
/// Unreadable or stale entries are rebuilt.
pub fn table(
    dir: Option<&Path>,
    sf: &SurfaceFile,
    h: &Holonomy,
    cutoff: f64,
    cfg: &EnumConfig,
) -> kform_core::Result<CurveTable> {
    let Some(dir) = dir else { return build_table(h, cutoff, cfg) };
    let p = path(dir, &key(sf, cutoff, cfg));
    if let Some(t) = read(&p) {
        return Ok(t);
    }
    let t = build_table(h, cutoff, cfg)?;
    let body = serde_json::to_string(&t).expect("table serializes");
    // A failed write only costs a rebuild next time.
    if fs::create_dir_all(dir).is_ok() {
        let tmp = p.with_extension("tmp");
        if fs::write(&tmp, format!("{HEADER}\n{body}")).is_ok() {
            let _ = fs::rename(&tmp, &p);
        }
    }
    Ok(t)
}
