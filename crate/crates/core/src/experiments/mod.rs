//! Parameter sweeps and figure presets producing numeric tables.

mod figures;
mod sweep;

pub use figures::{run_figure, FigureId, FigureOverrides};
pub use sweep::{run_sweep, PrecoderChoice, Series, SweepSpec, SweptParameter, XiChoice};

use serde::Serialize;

use crate::error::{Error, Result};

/// Rows of real numbers under named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    /// Appends the rows of `other`, which must have the same columns.
    pub fn append(&mut self, other: Table) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::validation("cannot append tables with different columns"));
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index(&self, column: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == column)
    }

    /// Value at `row` in `column`. Panics on an unknown column.
    pub fn get(&self, row: usize, column: &str) -> f64 {
        let j = self.index(column).unwrap_or_else(|| panic!("no column `{column}`"));
        self.rows[row][j]
    }

    pub fn column(&self, column: &str) -> Option<Vec<f64>> {
        let j = self.index(column)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}
