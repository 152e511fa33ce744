//! Case result directories.
//!
//! Each case lives in `<out>/<case id>/` with
//! `series.txt` (see [`CaseSeries`]), `summary.json` (status, summary and
//! segment rows) and `meta.json` (wall time, crate version). The directory
//! is assembled under a temporary name and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::run::CaseResult;
use crate::analysis::CaseSeries;
use crate::{Error, Result};

/// Write `data` to a sibling temporary file and rename it over `path`.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    let tmp = path.with_file_name(name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(data)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    wall_time: f64,
    version: String,
}

pub fn case_dir(out: &Path, result: &CaseResult) -> PathBuf {
    out.join(result.case.id())
}

pub fn save_case(out: &Path, result: &CaseResult) -> Result<PathBuf> {
    let dir = case_dir(out, result);
    let mut tmp_name = dir.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".partial");
    let tmp = dir.with_file_name(tmp_name);
    if tmp.exists() {
        fs::remove_dir_all(&tmp)?;
    }
    fs::create_dir_all(&tmp)?;
    fs::write(tmp.join("series.txt"), result.series.to_text())?;
    fs::write(tmp.join("summary.json"), serde_json::to_string_pretty(result)?)?;
    let meta = Meta {
        wall_time: result.wall_time,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    fs::write(tmp.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
    if dir.exists() {
        fs::remove_dir_all(&dir)?;
    }
    fs::rename(&tmp, &dir)?;
    Ok(dir)
}

pub fn load_case(dir: &Path) -> Result<CaseResult> {
    let parse_err = |path: PathBuf, e: &dyn std::fmt::Display| Error::Parse {
        path,
        detail: e.to_string(),
    };
    let summary_path = dir.join("summary.json");
    let mut result: CaseResult = serde_json::from_str(&fs::read_to_string(&summary_path)?)
        .map_err(|e| parse_err(summary_path.clone(), &e))?;
    let series_path = dir.join("series.txt");
    result.series = CaseSeries::parse(&fs::read_to_string(&series_path)?).map_err(|e| parse_err(series_path, &e))?;
    if let Ok(text) = fs::read_to_string(dir.join("meta.json")) {
        if let Ok(meta) = serde_json::from_str::<Meta>(&text) {
            result.wall_time = meta.wall_time;
        }
    }
    Ok(result)
}

/// Every case directory under `out`, sorted by name.
pub fn load_cases(out: &Path) -> Result<Vec<CaseResult>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(out)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.join("summary.json").exists())
        .collect();
    dirs.sort();
    dirs.iter().map(|d| load_case(d)).collect()
}
