//! Witness-assignment grids for the small qubit families: rows are the
//! conjugate-pair classes (the subgroup), columns the identity pair plus
//! one single per proper coset, and each cell names the bipartition
//! witnessed by that row/column combination — the split whose indicator is
//! the XOR of the two printed labels.
//!
//! Representative choice inside a coset is free, so the grid accepts an
//! override of printed labels; the default uses canonical (lexicographic
//! minimum) representatives.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::{coset_decomposition, display_split, GroupElement, Subgroup};
use crate::Result;

/// Which family to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableExample {
    N4,
    N5,
    N6,
}

impl TableExample {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "n4" => Ok(TableExample::N4),
            "n5" => Ok(TableExample::N5),
            "n6" => Ok(TableExample::N6),
            other => Err(Error::InvalidIndex(format!(
                "unknown table example {other:?}; expected n4, n5 or n6"
            ))),
        }
    }

    fn parameters(self) -> (usize, usize) {
        match self {
            TableExample::N4 => (4, 2),
            TableExample::N5 => (5, 2),
            TableExample::N6 => (6, 3),
        }
    }
}

/// Printed labels for the rows (pairs) and columns (identity pair followed
/// by the singles), as raw bit strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepOverride {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

/// Rendered grid. `cells[r][c]` is `None` on the identity combination.
#[derive(Debug, Clone, Serialize)]
pub struct TableGrid {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<Option<String>>>,
    /// True when printed labels are canonical representatives rather than
    /// an override.
    pub canonical_labels: bool,
}

impl TableGrid {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serialization is infallible")
    }

    /// Plain-text rendering.
    pub fn render_text(&self) -> String {
        let mut col_heads = vec!["".to_string()];
        col_heads.extend(self.cols.iter().map(|c| format!("psi_{c}")));
        let mut table: Vec<Vec<String>> = vec![col_heads];
        for (r, row_label) in self.rows.iter().enumerate() {
            let mut line = vec![format!("psi_{row_label}+-")];
            for cell in &self.cells[r] {
                line.push(cell.clone().unwrap_or_else(|| "null".to_string()));
            }
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &table {
            for (c, cell) in row.iter().enumerate() {
                out.push_str(&format!("{:width$}  ", cell, width = widths[c]));
            }
            out.pop();
            out.pop();
            out.push('\n');
        }
        if self.canonical_labels {
            out.push_str("labels: canonical coset representatives\n");
        }
        out
    }
}

fn parse_lift(n: usize, s: &str) -> Result<u64> {
    if s.len() != n || s.bytes().any(|b| b != b'0' && b != b'1') {
        return Err(Error::ParseError {
            line: 0,
            column: 0,
            message: format!("label {s:?} is not an {n}-bit string"),
        });
    }
    Ok(u64::from_str_radix(s, 2).expect("validated binary"))
}

/// Build the witness grid for one example, optionally with printed-label
/// overrides. Every override label must lie in the coset it replaces.
pub fn ghz_table(example: TableExample, reps: Option<&RepOverride>) -> Result<TableGrid> {
    let (n, t) = example.parameters();
    let subgroup = Subgroup::default_for(n as u32, t as u32)?;
    let dec = coset_decomposition(&subgroup)?;

    let row_elements = subgroup.elements();
    let mut col_elements = vec![GroupElement::identity(n as u32)?];
    col_elements.extend(dec.representatives().iter().copied());

    let (row_lifts, col_lifts, canonical) = match reps {
        None => (
            row_elements.iter().map(|e| e.bits()).collect::<Vec<_>>(),
            col_elements.iter().map(|e| e.bits()).collect::<Vec<_>>(),
            true,
        ),
        Some(over) => {
            if over.rows.len() != row_elements.len() || over.cols.len() != col_elements.len() {
                return Err(Error::InvalidIndex(format!(
                    "override needs {} row and {} column labels",
                    row_elements.len(),
                    col_elements.len()
                )));
            }
            // rows are the subgroup elements in ascending order
            let rows = over
                .rows
                .iter()
                .zip(&row_elements)
                .map(|(s, expect)| {
                    let lift = parse_lift(n, s)?;
                    if GroupElement::canonicalize(n as u32, lift)? != *expect {
                        return Err(Error::InvalidIndex(format!(
                            "row label {s} is not a lift of the pair class {expect}"
                        )));
                    }
                    Ok(lift)
                })
                .collect::<Result<Vec<_>>>()?;
            // columns may come in any order but must hit the identity pair
            // and then each proper coset exactly once
            let first = parse_lift(n, &over.cols[0])?;
            if !GroupElement::canonicalize(n as u32, first)?.is_identity() {
                return Err(Error::InvalidIndex(format!(
                    "first column label {} must be a lift of the identity pair",
                    over.cols[0]
                )));
            }
            let mut cols = vec![first];
            let mut used = vec![false; dec.representatives().len()];
            for s in &over.cols[1..] {
                let lift = parse_lift(n, s)?;
                let elem = GroupElement::canonicalize(n as u32, lift)?;
                let (_, idx) = dec.locate(&elem)?;
                match idx {
                    Some(l) if !used[l] => used[l] = true,
                    Some(_) => {
                        return Err(Error::InvalidIndex(format!(
                            "column label {s} repeats a coset"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidIndex(format!(
                            "column label {s} lies in the pair subgroup, not a proper coset"
                        )))
                    }
                }
                cols.push(lift);
            }
            (rows, cols, false)
        }
    };

    let bit_string = |lift: u64| crate::group::bits_to_string(n as u32, lift);
    let cells = row_lifts
        .iter()
        .map(|&r| {
            col_lifts
                .iter()
                .map(|&c| {
                    let raw = r ^ c;
                    if raw == 0 || raw == (1 << n) - 1 {
                        None
                    } else {
                        Some(display_split(n as u32, raw))
                    }
                })
                .collect()
        })
        .collect();

    Ok(TableGrid {
        rows: row_lifts.into_iter().map(bit_string).collect(),
        cols: col_lifts.into_iter().map(bit_string).collect(),
        cells,
        canonical_labels: canonical,
    })
}

/// The printed labels of the published grids.
pub fn paper_reps(example: TableExample) -> RepOverride {
    let (rows, cols): (Vec<&str>, Vec<&str>) = match example {
        TableExample::N4 => (
            vec!["0000", "0001"],
            vec!["0000", "0010", "0100", "1000"],
        ),
        TableExample::N5 => (
            vec!["00000", "00001"],
            vec![
                "00000", "00010", "00100", "01000", "10000", "00110", "01010", "10010",
            ],
        ),
        TableExample::N6 => (
            vec!["000000", "000001", "000010", "000011"],
            vec![
                "000000", "000100", "001000", "010000", "100000", "001100", "010100", "100100",
            ],
        ),
    };
    RepOverride {
        rows: rows.into_iter().map(String::from).collect(),
        cols: cols.into_iter().map(String::from).collect(),
    }
}
