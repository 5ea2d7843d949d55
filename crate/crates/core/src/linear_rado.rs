//! The columns condition for homogeneous linear systems `A x = 0` over `R`.
//!
//! `A` satisfies the columns condition when its columns admit an ordered
//! partition `C_1, ..., C_r` with `sum(C_1) = 0` and each later `sum(C_j)` in
//! the `K`-span of the columns in `C_1 ∪ ... ∪ C_{j-1}`. By Rado's theorem for
//! integral domains this is exactly partition regularity of `A x = 0` over
//! `R \ {0}`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::solve_in_span;
use crate::poly::{combine_system, MultiPoly, PolyError};
use crate::ring::{Domain, Element, FieldElement, RingError};

/// Column-count limit of the default search.
pub const DEFAULT_MAX_COLUMNS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadoError {
    #[error("matrix has no rows or no columns")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("{cols} columns exceeds the search limit of {limit}")]
    TooManyColumns { cols: usize, limit: usize },
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    domain: Domain,
    entries: Vec<Vec<Element>>,
    cols: usize,
}

impl LinearSystem {
    pub fn new(domain: &Domain, entries: Vec<Vec<Element>>) -> Result<Self, RadoError> {
        let cols = entries.first().map(Vec::len).ok_or(RadoError::Empty)?;
        if cols == 0 {
            return Err(RadoError::Empty);
        }
        if let Some((row, r)) = entries.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(RadoError::Ragged { row, expected: cols, got: r.len() });
        }
        Ok(Self { domain: domain.clone(), entries, cols })
    }

    /// Rows separated by `;` or newlines; entries by commas if any are present,
    /// otherwise by whitespace. Entries use the ring's element syntax.
    pub fn parse(domain: &Domain, text: &str) -> Result<Self, RadoError> {
        let mut rows = Vec::new();
        for line in text.split([';', '\n']).map(str::trim).filter(|l| !l.is_empty()) {
            let cells: Vec<&str> = if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            let row = cells.iter().map(|c| domain.parse_element(c)).collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::new(domain, rows)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<Element>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Element> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    fn column_sum(&self, cell: &[usize]) -> Vec<Element> {
        self.entries
            .iter()
            .map(|row| cell.iter().fold(self.domain.zero(), |acc, &j| self.domain.add(&acc, &row[j])))
            .collect()
    }

    /// Same system with columns reordered: new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let entries = self.entries.iter().map(|row| perm.iter().map(|&j| row[j].clone()).collect()).collect();
        Self { domain: self.domain.clone(), entries, cols: self.cols }
    }

    /// The linear forms `sum_j a_ij x_j`, one per row.
    pub fn row_polynomials(&self) -> Vec<MultiPoly> {
        self.entries
            .iter()
            .map(|row| {
                let terms = row.iter().enumerate().map(|(j, c)| {
                    let mut e = vec![0; self.cols];
                    e[j] = 1;
                    (e, c.clone())
                });
                MultiPoly::from_terms(&self.domain, self.cols, terms).expect("exponent lengths match")
            })
            .collect()
    }

    /// A single polynomial with the same roots as the whole system.
    pub fn to_polynomial(&self) -> Result<MultiPoly, PolyError> {
        combine_system(&self.row_polynomials())
    }

    pub fn format(&self) -> String {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| self.domain.format(e)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// An ordered partition of the (0-based) column indices with the `K`-linear
/// combinations certifying each cell after the first.
///
/// `combos[j - 1]` expresses the sum of `cells[j]`, keyed by every column in
/// `cells[0..j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnsWitness {
    pub cells: Vec<Vec<usize>>,
    pub combos: Vec<BTreeMap<usize, FieldElement>>,
}

/// Nonempty subsets of `pool` (sorted) as sorted vectors, in lexicographic order.
fn subsets_lex(pool: &[usize]) -> Vec<Vec<usize>> {
    fn rec(pool: &[usize], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..pool.len() {
            cur.push(pool[i]);
            out.push(cur.clone());
            rec(pool, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, 0, &mut Vec::new(), &mut out);
    out
}

pub fn columns_condition(a: &LinearSystem) -> Result<Option<ColumnsWitness>, RadoError> {
    columns_condition_with_limit(a, DEFAULT_MAX_COLUMNS)
}

/// Returns the lexicographically least witness (cells compared in order, each
/// as a sorted index list), or `None` if the columns condition fails.
///
/// Any valid cell choice extends to a full witness whenever one exists: if
/// `T_1, ..., T_s` is a witness and `U` the columns used so far, the nonempty
/// sets among `T_1 \ U, T_2 \ U, ...` continue it, since the removed columns
/// lie in the span already reached. So choosing the least valid cell at each
/// stage yields the least witness, and a stage with no valid cell proves
/// there is none.
pub fn columns_condition_with_limit(a: &LinearSystem, limit: usize) -> Result<Option<ColumnsWitness>, RadoError> {
    if a.cols > limit {
        return Err(RadoError::TooManyColumns { cols: a.cols, limit });
    }
    let dom = &a.domain;
    let mut remaining: Vec<usize> = (0..a.cols).collect();
    let mut used: Vec<usize> = Vec::new();
    let mut witness = ColumnsWitness { cells: Vec::new(), combos: Vec::new() };
    while !remaining.is_empty() {
        let used_cols: Vec<Vec<Element>> = used.iter().map(|&j| a.column(j)).collect();
        let mut chosen = None;
        for cell in subsets_lex(&remaining) {
            let sum = a.column_sum(&cell);
            if used.is_empty() {
                if sum.iter().all(|e| dom.is_zero(e)) {
                    chosen = Some((cell, None));
                    break;
                }
            } else if let Some(lambda) = solve_in_span(dom, &used_cols, &sum) {
                chosen = Some((cell, Some(lambda)));
                break;
            }
        }
        let Some((cell, lambda)) = chosen else {
            return Ok(None);
        };
        if let Some(lambda) = lambda {
            witness.combos.push(used.iter().copied().zip(lambda).collect());
        }
        remaining.retain(|j| !cell.contains(j));
        used.extend(&cell);
        used.sort_unstable();
        witness.cells.push(cell);
    }
    Ok(Some(witness))
}

/// Checks a witness directly against the definition, independent of the search.
pub fn verify_witness(a: &LinearSystem, w: &ColumnsWitness) -> Result<bool, RadoError> {
    let malformed = |m: &str| Err(RadoError::MalformedWitness(m.to_string()));
    let mut seen = vec![false; a.cols];
    for cell in &w.cells {
        if cell.is_empty() {
            return malformed("empty cell");
        }
        for &j in cell {
            if j >= a.cols {
                return malformed(&format!("column {j} out of range"));
            }
            if std::mem::replace(&mut seen[j], true) {
                return malformed(&format!("column {j} appears twice"));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return malformed("cells do not cover every column");
    }
    if w.combos.len() + 1 != w.cells.len() {
        return malformed("need one combination per cell after the first");
    }
    let dom = &a.domain;
    let first = a.column_sum(&w.cells[0]);
    if !first.iter().all(|e| dom.is_zero(e)) {
        return Ok(false);
    }
    let mut earlier: Vec<usize> = w.cells[0].clone();
    for (cell, combo) in w.cells[1..].iter().zip(&w.combos) {
        earlier.sort_unstable();
        if !combo.keys().copied().eq(earlier.iter().copied()) {
            return malformed("combination must be indexed by exactly the earlier columns");
        }
        let target = a.column_sum(cell);
        for (row, t) in a.entries.iter().zip(&target) {
            let lhs = combo
                .iter()
                .fold(dom.frac_zero(), |acc, (&j, lam)| dom.frac_add(&acc, &dom.frac_mul(lam, &dom.embed(&row[j]))));
            if lhs != dom.embed(t) {
                return Ok(false);
            }
        }
        earlier.extend(cell);
    }
    Ok(true)
}
