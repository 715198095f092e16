//! CSV and JSON artifact writers.
//!
//! Every float goes out with 17 significant digits so a reader recovers the
//! exact double.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `header` and then one line per row. Rows must match the header width.
pub fn write_csv<const W: usize>(path: &Path, header: [&str; W], rows: &[[f64; W]]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

/// Sidecar path next to a primary artifact: `points.csv` -> `points.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e == "json") {
        let mut s = path.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        path.with_extension("json")
    }
}
