//! CSV and JSON plumbing shared by the grid, sweep and CLI layers.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{MebError, MebResult};
use crate::linalg::CMatrix;

/// Formats a float with 17 significant digits (round-trips any f64).
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// A table row that can be emitted as CSV.
pub trait CsvRecord {
    fn header() -> &'static str;
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: CsvRecord>(out: &mut dyn Write, rows: &[R]) -> MebResult<()> {
    writeln!(out, "{}", R::header())?;
    for r in rows {
        writeln!(out, "{}", r.fields().join(","))?;
    }
    Ok(())
}

pub fn csv_string<R: CsvRecord>(rows: &[R]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Complex entry as `[re, im]`.
pub fn complex_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    m.entries_row_major().iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_pairs(rows: usize, cols: usize, pairs: &[[f64; 2]]) -> MebResult<CMatrix> {
    if pairs.len() != rows * cols {
        return Err(MebError::Malformed(format!(
            "expected {} entries, found {}",
            rows * cols,
            pairs.len()
        )));
    }
    CMatrix::new(rows, cols, pairs.iter().map(|p| C64::new(p[0], p[1])).collect())
}

/// Standalone matrix document (witness operators and similar).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: complex_pairs(m) }
    }

    pub fn to_matrix(&self) -> MebResult<CMatrix> {
        matrix_from_pairs(self.rows, self.cols, &self.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for x in [1.0 / 3.0, -0.7194, 1e-300, 0.1 + 0.2] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }
}
