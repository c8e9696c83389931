use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::Table;

/// Formats `x` with 9 significant digits, switching to exponent notation
/// outside `[1e-5, 1e9)`. Trailing zeros are dropped.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes `table` as CSV: one `#` comment line, a header row, then the rows.
pub fn write_csv<W: Write>(table: &Table, comment: &str, mut out: W) -> std::io::Result<()> {
    debug_assert!(!comment.contains('\n'));
    writeln!(out, "# {comment}")?;
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_real(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

/// Writes to `path`, or standard output when `path` is `None`.
pub fn emit_csv(table: &Table, comment: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let io = |source| Error::Io {
                path: p.to_path_buf(),
                source,
            };
            let f = File::create(p).map_err(io)?;
            write_csv(table, comment, BufWriter::new(f)).map_err(io)
        }
        None => write_csv(table, comment, std::io::stdout().lock()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
