// SPDX-License-Identifier: Apache-2.0

//! CSV, PGM and JSON writers.
//!
//! Numbers are written with 17 significant digits so that reading a CSV back
//! reproduces the tensor bit for bit.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use corrdyn_core::correlation::g2_from_g4;
use corrdyn_core::{CorrelationTensor, RealMatrix};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// File-name label of a snapshot time: `50`, `0.25`, ...
pub fn time_label(t: f64) -> String {
    format!("{t}")
}

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// Writes a real matrix as CSV after a single `#` comment line.
pub fn write_matrix_csv(path: &Path, comment: &str, m: &RealMatrix) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::io(path, e);
    let mut out = create(path)?;
    writeln!(out, "# {comment}").map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for r in 0..m.rows() {
        w.write_record(m.row(r).iter().map(|&x| format_value(x)))
            .map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

/// Reads a matrix written by [`write_matrix_csv`].
pub fn read_matrix_csv(path: &Path) -> CliResult<RealMatrix> {
    let bad = |msg: String| {
        CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, msg),
        )
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let row = record
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("{s:?}: {e}")))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    RealMatrix::from_rows(&rows).ok_or_else(|| bad("ragged rows".into()))
}

/// Plain-text greyscale image of `|G⁴|`, scaled by the largest magnitude.
pub fn write_pgm(path: &Path, magnitudes: &RealMatrix) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::io(path, e);
    let max = magnitudes.as_slice().iter().copied().fold(0.0, f64::max);
    let mut out = create(path)?;
    writeln!(out, "P2\n{} {}\n255", magnitudes.cols(), magnitudes.rows()).map_err(io)?;
    for r in 0..magnitudes.rows() {
        let line: Vec<String> = magnitudes
            .row(r)
            .iter()
            .map(|&x| {
                let level = if max > 0.0 {
                    (255.0 * x / max).round()
                } else {
                    0.0
                };
                format!("{}", level as u8)
            })
            .collect();
        writeln!(out, "{}", line.join(" ")).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::io(path, e);
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| io(e.into()))?;
    writeln!(out).map_err(io)?;
    out.flush().map_err(io)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotSummary {
    pub time: f64,
    pub trace_drift: f64,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub symmetric_weight: f64,
    pub antisymmetric_weight: f64,
    pub files: Vec<String>,
}

fn g4_comment(part: &str, n: usize) -> String {
    format!(
        "G4 {part} part, N={n}; row/column index (p-1)*N+(q-1) for the site pair (p,q), sites 1-based"
    )
}

/// Writes the CSV (and optionally PGM) files of one snapshot into `dir`.
pub fn write_snapshot(
    dir: &Path,
    g: &CorrelationTensor,
    heatmap: bool,
) -> CliResult<SnapshotSummary> {
    let n = g.n_sites();
    let label = time_label(g.time);
    let mut files = Vec::new();
    let mut put = |name: String| -> PathBuf {
        files.push(name.clone());
        dir.join(name)
    };
    write_matrix_csv(
        &put(format!("g4_t{label}_re.csv")),
        &g4_comment("real", n),
        &g.matrix.re(),
    )?;
    write_matrix_csv(
        &put(format!("g4_t{label}_im.csv")),
        &g4_comment("imaginary", n),
        &g.matrix.im(),
    )?;
    let g2 = g2_from_g4(g)?;
    write_matrix_csv(
        &put(format!("g2_t{label}.csv")),
        &format!("G2, N={n}; row p, column q, sites 1-based"),
        &g2,
    )?;
    if heatmap {
        write_pgm(&put(format!("g4_t{label}.pgm")), &g.matrix.abs())?;
    }
    let d = g.diagnostics();
    Ok(SnapshotSummary {
        time: g.time,
        trace_drift: d.trace_drift,
        hermiticity_residual: d.hermiticity_residual,
        min_eigenvalue: d.min_eigenvalue,
        symmetric_weight: d.sym_weight,
        antisymmetric_weight: d.antisym_weight,
        files,
    })
}
