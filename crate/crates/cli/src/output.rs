use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ftl_core::C2;
use serde::Serialize;

use crate::error::CliError;

/// A CSV column and the line documenting it in the file header.
pub struct Column {
    pub name: String,
    pub doc: String,
}

pub fn col(name: impl Into<String>, doc: impl Into<String>) -> Column {
    Column {
        name: name.into(),
        doc: doc.into(),
    }
}

/// The four real coordinates of a point, named `{prefix}_re1` and so on.
pub fn point_columns(prefix: &str, what: &str) -> Vec<Column> {
    ["re1", "im1", "re2", "im2"]
        .iter()
        .zip(["Re z1", "Im z1", "Re z2", "Im z2"])
        .map(|(s, c)| col(format!("{prefix}_{s}"), format!("{c} of {what}")))
        .collect()
}

pub fn point_cells(p: C2) -> Vec<String> {
    p.to_reals().iter().map(|x| num(*x)).collect()
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes `rows` under a `#` comment block describing every column.
pub fn write_csv(path: &Path, title: &str, columns: &[Column], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# {title}")?;
    writeln!(out, "# Lines starting with '#' are comments. Empty cells mean \"not applicable\".")?;
    writeln!(out, "# Columns:")?;
    for c in columns {
        writeln!(out, "#   {}: {}", c.name, c.doc)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns.iter().map(|c| c.name.as_str()))?;
    for r in rows {
        debug_assert_eq!(r.len(), columns.len());
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Creates the output directory and returns the path of `name` inside it.
pub fn out_file(dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}
