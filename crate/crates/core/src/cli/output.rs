//! CSV files with `#` metadata lines.
//!
//! Floats use Rust's shortest round-trip formatting, so identical runs give
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

use super::config::ExperimentConfig;

/// Shortest round-trip text for `v`, switching to exponent form outside
/// `[1e-5, 1e16)` in magnitude.
pub fn fmt_float(v: f64) -> String {
    let m = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&m) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn write_cell<W: Write>(w: &mut W, cell: &Cell) -> std::io::Result<()> {
    match cell {
        Cell::Num(v) => write!(w, "{}", fmt_float(*v)),
        Cell::Text(t) if t.contains([',', '"', '\n']) => write!(w, "\"{}\"", t.replace('"', "\"\"")),
        Cell::Text(t) => write!(w, "{t}"),
        Cell::Empty => Ok(()),
    }
}

/// Streaming CSV writer. The header block lists the crate version and the
/// resolved configuration, one `# key = value` line each.
pub struct CsvWriter {
    path: PathBuf,
    out: BufWriter<File>,
    columns: usize,
}

impl CsvWriter {
    pub fn create(path: &Path, config: &ExperimentConfig, columns: &[&str]) -> Result<Self> {
        Self::create_with(path, config, &[], columns)
    }

    /// Like [`CsvWriter::create`], with extra `# key = value` lines after the
    /// configuration block.
    pub fn create_with(
        path: &Path,
        config: &ExperimentConfig,
        extra: &[(&str, String)],
        columns: &[&str],
    ) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "# hyperkpp {}", env!("CARGO_PKG_VERSION"))?;
        for line in config.to_file_string().lines() {
            writeln!(out, "# {line}")?;
        }
        for (key, value) in extra {
            writeln!(out, "# {key} = {value}")?;
        }
        writeln!(out, "{}", columns.join(","))?;
        Ok(Self {
            path: path.to_path_buf(),
            out,
            columns: columns.len(),
        })
    }

    pub fn row(&mut self, cells: &[Cell]) -> Result<()> {
        debug_assert_eq!(cells.len(), self.columns, "row width in {}", self.path.display());
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                self.out.write_all(b",")?;
            }
            write_cell(&mut self.out, cell)?;
        }
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

/// Reads back the data rows of a file written by [`CsvWriter`]: the column
/// names and every row split on commas. Intended for tests and examples.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 2.865e-8, 1e-300, 6.02e23, 123456.789, -1e-5] {
            let text = fmt_float(v);
            assert_eq!(text.parse::<f64>().unwrap(), v, "{text}");
        }
        assert_eq!(fmt_float(2.5e-8), "2.5e-8");
        assert_eq!(fmt_float(0.5), "0.5");
    }
}
