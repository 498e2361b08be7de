//! Edit distance over symbol sequences and dense pairwise distance matrices.
//!
//! Distances are exact integers; nothing in this module touches floating
//! point. Sequences hold Unicode scalar values after NFC normalization so
//! Middle English characters (þ, ȝ) round-trip and compare predictably.

use std::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// An ordered sequence of atomic symbols (one Unicode scalar each, NFC).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSequence {
    symbols: Vec<char>,
}

impl SymbolSequence {
    /// Builds a sequence from text, applying NFC normalization first.
    pub fn new(text: &str) -> Self {
        SymbolSequence { symbols: text.nfc().collect() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl From<&str> for SymbolSequence {
    fn from(text: &str) -> Self {
        SymbolSequence::new(text)
    }
}

/// Levenshtein distance: the minimum number of single-symbol insertions,
/// deletions, and substitutions (all unit cost, no transpositions) needed
/// to turn `s` into `t`. O(|s|·|t|) time, O(min) space.
pub fn edit_distance(s: &SymbolSequence, t: &SymbolSequence) -> u32 {
    let (a, b) = (s.symbols(), t.symbols());
    if a.is_empty() {
        return b.len() as u32;
    }
    if b.is_empty() {
        return a.len() as u32;
    }

    let mut row: Vec<u32> = (0..=b.len() as u32).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i as u32 + 1;
        for (j, &cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            let next = (diag + cost).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

/// A dense symmetric matrix of pairwise edit distances with zero diagonal.
///
/// Immutable after construction; `n` stays in the low hundreds for the
/// intended inputs, so O(n²) storage is deliberate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    /// Computes the full pairwise matrix: only the upper triangle is
    /// evaluated and then mirrored.
    pub fn from_items(items: &[SymbolSequence]) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = items.len();
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = edit_distance(&items[i], &items[j]);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    /// Wraps raw row-major entries. Used by fixtures and CSV loading;
    /// callers wanting the metric axioms checked should follow up with
    /// [`DistanceMatrix::validate_metric`].
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixCell {
                    row: i,
                    col: row.len(),
                    message: format!("row has {} entries, expected {}", row.len(), n),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Checks the metric axioms: zero diagonal, symmetry, and the triangle
    /// inequality. O(n³), fine at the intended sizes.
    pub fn validate_metric(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0 {
                return Err(Error::InvalidDistanceMatrix {
                    reason: format!("nonzero diagonal at ({i}, {i})"),
                });
            }
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::InvalidDistanceMatrix {
                        reason: format!("asymmetric at ({i}, {j})"),
                    });
                }
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let dij = self.get(i, j) as u64;
                for k in 0..self.n {
                    if (self.get(i, k) as u64) > dij + self.get(j, k) as u64 {
                        return Err(Error::InvalidDistanceMatrix {
                            reason: format!("triangle inequality fails at ({i}, {j}, {k})"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes to CSV: integer entries, comma-separated, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|d| d.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the CSV form. Rejects ragged rows, non-square shapes, and
    /// non-integer cells, reporting the offending cell coordinates.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for (j, cell) in line.split(',').enumerate() {
                let value = cell.trim().parse::<u32>().map_err(|e| Error::MatrixCell {
                    row: i,
                    col: j,
                    message: format!("\"{}\": {e}", cell.trim()),
                })?;
                row.push(value);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixCell {
                    row: i,
                    col: row.len(),
                    message: format!("row has {} entries, expected {}", row.len(), n),
                });
            }
        }
        if rows.len() != n {
            return Err(Error::InvalidDistanceMatrix {
                reason: format!("{} rows of {} columns is not square", rows.len(), n),
            });
        }
        DistanceMatrix::from_rows(rows)
    }
}
