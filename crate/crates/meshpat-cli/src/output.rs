//! Report writing: atomic file replacement and the partition CSV format.

use anyhow::{Context, Result};
use meshpat::EquivalencePartition;
use std::io::Write;
use std::path::Path;

/// Write `contents` to `path` by persisting a fully written temp file from
/// the same directory, so a failed or interrupted run never leaves a
/// truncated report behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temp file next to {}", path.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

/// Render a partition as CSV with one row per class:
/// `class_id,representative,members,provenance`, members space-joined.
pub fn partition_csv(part: &EquivalencePartition) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class_id", "representative", "members", "provenance"])?;
    let provenance = part.provenance().to_string();
    for (id, members) in part.classes().enumerate() {
        let joined = members
            .iter()
            .map(|&m| part.universe()[m].to_string())
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            &id.to_string(),
            &part.representative(id).to_string(),
            &joined,
            &provenance,
        ])?;
    }
    let bytes = w.into_inner().context("flushing the CSV writer")?;
    String::from_utf8(bytes).context("CSV output was not UTF-8")
}
