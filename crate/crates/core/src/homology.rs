//! Cellular chain complex of `cell(n, w)` over GF(2).

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::{compositions, enumerate_cells, for_each_face, StripParams, Symbol};

/// Column-major sparse matrix over GF(2). Each column is a sorted list of row indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBitMatrix {
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl SparseBitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col)` positions; repeated positions cancel.
    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range {rows}x{cols}");
            m.columns[c].push(r as u32);
        }
        for col in &mut m.columns {
            normalize(col);
        }
        m
    }

    fn from_columns(rows: usize, columns: Vec<Vec<u32>>) -> Self {
        Self { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[u32] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].binary_search(&(r as u32)).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Positions of the ones, sorted by `(row, col)`.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&r| (r as usize, c)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `self * rhs` over GF(2).
    pub fn mul(&self, rhs: &SparseBitMatrix) -> SparseBitMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch");
        let columns = rhs
            .columns
            .par_iter()
            .map(|rcol| {
                let mut acc: Vec<u32> = rcol
                    .iter()
                    .flat_map(|&k| self.columns[k as usize].iter().copied())
                    .collect();
                normalize(&mut acc);
                acc
            })
            .collect();
        SparseBitMatrix::from_columns(self.rows, columns)
    }

    /// Reorders columns: column `i` of the result is column `perm[i]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> SparseBitMatrix {
        assert_eq!(perm.len(), self.cols());
        let columns = perm.iter().map(|&c| self.columns[c].clone()).collect();
        SparseBitMatrix::from_columns(self.rows, columns)
    }

    pub fn rank(&self) -> usize {
        reduce(self, |_| false).rank
    }

    /// `rows cols` header, then one sorted `r c` pair per line.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols());
        for (r, c) in self.entries() {
            writeln!(out, "{r} {c}").unwrap();
        }
        out
    }
}

/// Sorts and cancels pairs of equal entries.
fn normalize(col: &mut Vec<u32>) {
    col.sort_unstable();
    let mut out = Vec::with_capacity(col.len());
    let mut i = 0;
    while i < col.len() {
        let mut j = i;
        while j < col.len() && col[j] == col[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(col[i]);
        }
        i = j;
    }
    *col = out;
}

/// Symmetric difference of two sorted lists.
fn add_into(target: &mut Vec<u32>, other: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

struct Reduction {
    rank: usize,
    /// Row indices that ended up as the lowest entry of some reduced column.
    pivots: Vec<u32>,
}

/// Standard column reduction by lowest nonzero row. Columns for which `skip`
/// returns true are known to reduce to zero and are not touched.
fn reduce(m: &SparseBitMatrix, skip: impl Fn(usize) -> bool) -> Reduction {
    let mut owner: Vec<Option<u32>> = vec![None; m.rows];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    let mut pivots = Vec::new();
    let mut scratch = Vec::new();
    for c in 0..m.cols() {
        if skip(c) {
            continue;
        }
        let mut col = m.columns[c].clone();
        while let Some(&low) = col.last() {
            match owner[low as usize] {
                Some(other) => add_into(&mut col, &reduced[other as usize], &mut scratch),
                None => {
                    owner[low as usize] = Some(c as u32);
                    pivots.push(low);
                    break;
                }
            }
        }
        reduced[c] = col;
    }
    Reduction {
        rank: pivots.len(),
        pivots,
    }
}

/// The cells of `cell(n, w)` grouped by dimension, with index lookup.
pub struct CellComplex {
    params: StripParams,
    cells: Vec<Vec<Symbol>>,
    index: Vec<HashMap<Symbol, u32>>,
}

impl CellComplex {
    pub fn new(p: StripParams) -> Self {
        let cells: Vec<Vec<Symbol>> = (0..=p.dimension())
            .map(|d| enumerate_cells(p, Some(d)))
            .collect();
        let index = cells
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect())
            .collect();
        Self { params: p, cells, index }
    }

    pub fn params(&self) -> StripParams {
        self.params
    }

    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, dim: usize) -> &[Symbol] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `∂_dim`: rows are `(dim-1)`-cells, columns `dim`-cells, both in enumeration order.
    pub fn boundary(&self, dim: usize) -> Result<SparseBitMatrix> {
        if dim == 0 || dim > self.dimension() {
            return Err(Error::DimensionOutOfRange {
                dim,
                max: self.dimension(),
            });
        }
        let rows = &self.index[dim - 1];
        let columns = self.cells[dim]
            .par_iter()
            .map(|s| {
                let mut col = Vec::new();
                for_each_face(s, |f| {
                    col.push(*rows.get(&f).expect("face of a cell lies in the complex"));
                });
                normalize(&mut col);
                col
            })
            .collect();
        Ok(SparseBitMatrix::from_columns(self.cells[dim - 1].len(), columns))
    }

    /// Betti numbers over GF(2). Reduces from the top dimension down so that
    /// columns paired in `∂_{d+1}` can be skipped in `∂_d`.
    pub fn betti(&self) -> BettiVector {
        let top = self.dimension();
        let mut ranks = vec![0usize; top + 2];
        let mut cleared: Vec<bool> = Vec::new();
        for d in (1..=top).rev() {
            let m = self.boundary(d).expect("dimension in range");
            let red = reduce(&m, |c| cleared.get(c).copied().unwrap_or(false));
            ranks[d] = red.rank;
            cleared = vec![false; m.rows()];
            for r in red.pivots {
                cleared[r as usize] = true;
            }
        }
        let betti = (0..=top)
            .map(|d| self.cells[d].len() - ranks[d] - ranks[d + 1])
            .collect();
        BettiVector { betti }
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.cell_counts())
    }
}

fn alternating_sum(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub betti: Vec<usize>,
}

impl BettiVector {
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.betti)
    }
}

pub fn boundary_matrix(p: StripParams, dim: usize) -> Result<SparseBitMatrix> {
    if dim == 0 || dim > p.dimension() {
        return Err(Error::DimensionOutOfRange {
            dim,
            max: p.dimension(),
        });
    }
    CellComplex::new(p).boundary(dim)
}

pub fn betti(p: StripParams) -> BettiVector {
    CellComplex::new(p).betti()
}

/// Number of `dim`-cells, `n! * #{compositions of n into n - dim parts of size ≤ w}`.
pub fn cell_count(p: StripParams, dim: usize) -> Option<u128> {
    if dim > p.dimension() {
        return Some(0);
    }
    let comps = compositions(p.n(), p.w(), Some(p.n() - dim)).len() as u128;
    (1..=p.n() as u128).try_fold(comps, |acc, k| acc.checked_mul(k))
}

/// `Σ (-1)^j #cells_j`, from the closed-form counts.
pub fn euler_characteristic(p: StripParams) -> Result<i128> {
    (0..=p.dimension()).try_fold(0i128, |acc, j| {
        let c = cell_count(p, j)
            .and_then(|c| i128::try_from(c).ok())
            .ok_or_else(|| Error::InvalidParams(format!("cell count overflows for n = {}", p.n())))?;
        Ok(if j % 2 == 0 { acc + c } else { acc - c })
    })
}
