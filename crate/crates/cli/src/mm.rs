//! Matrix Market `array` files: dense, column-major, `real`, `integer` or
//! `complex` entries with `general` symmetry.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use targetkit::ComplexMatrix;

use crate::CliError;

const BANNER: &str = "%%MatrixMarket matrix array";

/// Renders a matrix with 17 significant digits per component; real-tagged
/// matrices are written as `real`, everything else as `complex`.
pub fn to_string(m: &ComplexMatrix) -> String {
    let kind = if m.is_real() { "real" } else { "complex" };
    let mut out = format!("{BANNER} {kind} general\n{} {}\n", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m.get(i, j);
            if m.is_real() {
                out.push_str(&format!("{:.16e}\n", z.re));
            } else {
                out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
            }
        }
    }
    out
}

pub fn parse(text: &str) -> Result<ComplexMatrix, CliError> {
    let bad = |msg: String| CliError::Input(msg);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty matrix file".into()))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(bad(format!("not a Matrix Market header: '{header}'")));
    }
    if words[2] != "array" {
        return Err(bad(format!("only the array format is supported, got '{}'", words[2])));
    }
    let complex = match words[3].as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => return Err(bad(format!("unsupported entry kind '{other}'"))),
    };
    if words[4] != "general" {
        return Err(bad(format!("unsupported symmetry '{}'", words[4])));
    }

    let mut body = lines.filter(|l| !l.trim_start().starts_with('%') && !l.trim().is_empty());
    let size = body.next().ok_or_else(|| bad("missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(format!("bad size line '{size}'"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("size line needs two integers, got '{size}'")));
    };

    let per_entry = if complex { 2 } else { 1 };
    let mut entries = Vec::with_capacity(rows * cols);
    for line in body {
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad entry '{t}'"))))
            .collect::<Result<_, _>>()?;
        if vals.len() != per_entry {
            return Err(bad(format!("expected {per_entry} value(s) per line, got '{line}'")));
        }
        entries.push(Complex64::new(vals[0], if complex { vals[1] } else { 0.0 }));
    }
    if entries.len() != rows * cols {
        return Err(bad(format!("expected {} entries for {rows}×{cols}, found {}", rows * cols, entries.len())));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(bad("matrix entries must be finite".into()));
    }
    ComplexMatrix::from_row_slice(rows, cols, &column_to_row_major(rows, cols, &entries)).map_err(CliError::Core)
}

fn column_to_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Vec<Complex64> {
    let mut row_major = Vec::with_capacity(entries.len());
    for i in 0..rows {
        for j in 0..cols {
            row_major.push(entries[j * rows + i]);
        }
    }
    row_major
}

pub fn read(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write(path: &Path, m: &ComplexMatrix) -> Result<(), CliError> {
    fs::write(path, to_string(m)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
