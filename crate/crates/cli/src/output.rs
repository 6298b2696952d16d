use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use gaussmap_core::report::CheckReport;

/// Write via a sibling temp file and rename, so readers never see a
/// partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// `<stem>.json` plus, with `csv`, one `<stem>-<field>.csv` per field grid.
pub fn write_report(dir: &Path, stem: &str, report: &CheckReport, csv: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let path = dir.join(format!("{stem}.json"));
    write_atomic(&path, &report.to_json())?;
    written.push(path);
    if csv {
        for (name, _) in &report.grids {
            if let Some(text) = report.csv(name) {
                let path = dir.join(format!("{stem}-{}.csv", sanitize(name)));
                write_atomic(&path, &text)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
