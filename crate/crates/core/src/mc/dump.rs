//! Plain-text matrix dumps for debugging.
//!
//! ```text
//! 2 3
//! 1,0 0.5,-0.25 -1e-3,2
//! 0,0 1,1 3,0
//! ```
//!
//! The first line holds the row and column counts. Each following line is one
//! row, entries separated by a space, each entry `re,im`. Values are printed
//! in the shortest form that parses back to the same `f64`.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

pub fn write_matrix<W: Write>(m: &CMatrix, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", m.nrows(), m.ncols())?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{},{}", m[(i, j)].re, m[(i, j)].im)).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::validation(format!("matrix dump line {line}: {msg}"))
}

pub fn read_matrix<R: BufRead>(input: R) -> Result<CMatrix> {
    let mut lines = input.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let io = |e: std::io::Error| Error::validation(format!("reading matrix dump: {e}"));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header = header.map_err(io)?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| parse_err(1, e)))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(1, "expected `rows cols`"));
    };

    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        let (n, line) = lines.next().ok_or_else(|| parse_err(i + 2, "missing row"))?;
        let line = line.map_err(io)?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(parse_err(n + 1, format!("expected {cols} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            let (re, im) = e.split_once(',').ok_or_else(|| parse_err(n + 1, format!("bad entry `{e}`")))?;
            let re: f64 = re.parse().map_err(|err| parse_err(n + 1, err))?;
            let im: f64 = im.parse().map_err(|err| parse_err(n + 1, err))?;
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n + 1, "trailing data"));
    }
    Ok(m)
}
