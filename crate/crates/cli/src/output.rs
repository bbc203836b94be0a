use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use lcos_core::consistency::{ConsistencyMatrix, MatrixJson};

/// Writes through a sibling temp file and a rename, so readers never see a
/// half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let name = path
        .file_name()
        .with_context(|| format!("{} is not a file path", path.display()))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, &text)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn load_matrix(path: &Path) -> Result<ConsistencyMatrix> {
    let text = read_to_string(path)?;
    let m = if is_csv(path) {
        ConsistencyMatrix::from_csv(&text)
    } else {
        let json: MatrixJson =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        ConsistencyMatrix::from_json(&json)
    };
    m.with_context(|| format!("loading matrix {}", path.display()))
}

pub fn save_matrix(path: &Path, m: &ConsistencyMatrix) -> Result<()> {
    if is_csv(path) {
        write_atomic(path, &m.to_csv())
    } else {
        write_atomic(path, &m.to_json().to_pretty_string())
    }
}
