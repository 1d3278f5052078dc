use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dqn::EpisodeRecord;
use crate::error::{Error, Result};
use crate::grape::GrapeResult;

pub const CURVE_HEADER: &str = "episode,epsilon,lambda,final_fidelity,greedy_fidelity,W,Y,Z";
pub const GRAPE_COST_HEADER: &str = "iteration,cost";
pub const GRAPE_CONTROLS_HEADER: &str = "slice,u1,u2";

/// Decimal rendering rounded to 12 significant digits, without exponent.
///
/// Trailing zeros are dropped, so `0.5` prints as `0.5` and `1` as `1`.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

/// Learning curve CSV, one row per round. Unlogged cells are left empty.
pub fn curve_csv(records: &[EpisodeRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.episode,
            opt(r.epsilon),
            r.lambda,
            format_sig12(r.final_fidelity),
            opt(r.greedy_fidelity),
            format_sig12(r.weights.w),
            format_sig12(r.weights.y),
            format_sig12(r.weights.z),
        )
        .unwrap();
    }
    out
}

/// Cost after each GRAPE iteration, starting with the initial guess at iteration 0.
pub fn grape_cost_csv(result: &GrapeResult) -> String {
    let mut out = format!("{GRAPE_COST_HEADER}\n");
    for (i, j) in result.cost_history.iter().enumerate() {
        writeln!(out, "{i},{}", format_sig12(*j)).unwrap();
    }
    out
}

pub fn grape_controls_csv(result: &GrapeResult) -> String {
    let mut out = format!("{GRAPE_CONTROLS_HEADER}\n");
    let [u1, u2] = &result.controls.values;
    for (i, (a, b)) in u1.iter().zip(u2).enumerate() {
        writeln!(out, "{i},{},{}", format_sig12(*a), format_sig12(*b)).unwrap();
    }
    out
}

/// A written artifact, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

pub(crate) fn pretty_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Writes `contents` to `root/rel`, creating parent directories.
pub(crate) fn write_file(root: &Path, rel: &str, contents: &[u8]) -> Result<FileEntry> {
    let path = root.join(rel);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(FileEntry {
        path: rel.to_string(),
        bytes: contents.len() as u64,
        sha256: hex::encode(Sha256::digest(contents)),
    })
}

#[derive(Serialize)]
struct Manifest<'a> {
    files: &'a [FileEntry],
}

/// Writes `manifest.json` listing `files` sorted by path and returns its location.
pub fn write_manifest(root: &Path, files: &[FileEntry]) -> Result<PathBuf> {
    let mut sorted = files.to_vec();
    sorted.sort_by(|a, b| a.path.cmp(&b.path));
    write_file(root, "manifest.json", pretty_json(&Manifest { files: &sorted }).as_bytes())?;
    Ok(root.join("manifest.json"))
}
