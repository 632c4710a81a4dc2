//! Column tables backing every CSV artifact.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{CdwError, Result};

/// Named columns of `f64` rows. Missing values are stored as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        CurveTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(CdwError::domain(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Header line then one line per row, `\n` terminated, numbers in
    /// scientific notation with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format_number(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Parses text produced by [`to_csv`](Self::to_csv).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CdwError::domain("empty CSV"))?;
        let mut table = CurveTable::new(header.split(','));
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| CdwError::domain(format!("row {}: bad number {s:?}", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }

    /// Writes via a sibling temporary file and a rename so a reader never
    /// sees a partial file.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }
}

pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        let mut s = String::new();
        write!(s, "{v:.16e}").expect("write to String");
        s
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CdwError::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(CdwError::from)
}
