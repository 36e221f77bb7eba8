//! Cell labels of `cell(n, w)`.
//!
//! A [`Symbol`] is an ordered partition of `{1..n}` into nonempty ordered
//! blocks. Its dimension is `n - #blocks`. Restricting block lengths to at
//! most `w` gives the cells of the complex `cell(n, w)`, which is homotopy
//! equivalent to the configuration space of `n` unit disks in a strip of
//! width `w`.
//!
//! Text form: blocks separated by `|`, labels inside a block separated by a
//! single space, e.g. `"14 10 9 8|13 7 6 5|12 4 3 2|11 1"`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Disk label, `1..=n`.
pub type Label = u8;

/// Largest supported number of disks (labels are stored as `u8`).
pub const MAX_DISKS: usize = Label::MAX as usize;

/// Number of disks and strip width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StripParams {
    n: usize,
    w: usize,
}

impl StripParams {
    /// Width 1 is rejected: the strip then admits no reordering of disks at all.
    pub fn new(n: usize, w: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if n > MAX_DISKS {
            return Err(Error::InvalidParams(format!("n must be at most {MAX_DISKS}")));
        }
        if w < 2 {
            return Err(Error::InvalidParams(format!(
                "w must be at least 2 (got {w}); cell(n,1) is a discrete set of points"
            )));
        }
        Ok(Self { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Minimal number of blocks, `ceil(n / w)`.
    pub fn min_blocks(&self) -> usize {
        self.n.div_ceil(self.w)
    }

    /// Dimension of `cell(n, w)`: `n - ceil(n / w)`.
    pub fn dimension(&self) -> usize {
        self.n - self.min_blocks()
    }

    /// True if `s` is a cell of `cell(n, w)`.
    pub fn contains(&self, s: &Symbol) -> bool {
        s.n() == self.n && s.sizes.iter().all(|&k| (k as usize) <= self.w)
    }

    pub fn check_cell(&self, s: &Symbol) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::NotACell {
                symbol: s.to_string(),
                n: self.n,
                w: self.w,
            })
        }
    }
}

/// Dimension of `cell(n, w)`.
pub fn dimension(p: StripParams) -> usize {
    p.dimension()
}

/// An ordered partition of `{1..n}` into ordered nonempty blocks.
///
/// Stored flat: the labels in reading order plus the block lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    labels: Vec<Label>,
    sizes: Vec<u8>,
}

impl Symbol {
    /// Builds a symbol from explicit blocks, checking the partition invariants.
    pub fn from_blocks<B: AsRef<[Label]>>(blocks: &[B]) -> Result<Self, ParseError> {
        let n: usize = blocks.iter().map(|b| b.as_ref().len()).sum();
        if n == 0 {
            return Err(ParseError::Empty);
        }
        if n > MAX_DISKS {
            return Err(ParseError::InvalidToken {
                token: format!("<{n} labels>"),
            });
        }
        let mut seen = vec![false; n + 1];
        let mut labels = Vec::with_capacity(n);
        let mut sizes = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(ParseError::EmptyBlock { block: i + 1 });
            }
            for &l in block {
                let l = l as usize;
                if l == 0 {
                    return Err(ParseError::InvalidToken { token: "0".into() });
                }
                if l > n {
                    let missing = (1..=n).find(|&x| !seen[x] && !contains_label(blocks, x));
                    return Err(ParseError::MissingLabel {
                        label: l,
                        n,
                        missing: missing.unwrap_or(n),
                    });
                }
                if seen[l] {
                    return Err(ParseError::DuplicateLabel { label: l });
                }
                seen[l] = true;
                labels.push(l as Label);
            }
            sizes.push(block.len() as u8);
        }
        Ok(Self { labels, sizes })
    }

    /// Internal constructor for pieces already known to be a valid partition.
    pub(crate) fn from_parts(labels: Vec<Label>, sizes: Vec<u8>) -> Self {
        debug_assert_eq!(labels.len(), sizes.iter().map(|&k| k as usize).sum::<usize>());
        Self { labels, sizes }
    }

    /// The 0-cell `n|n-1|...|1`.
    pub fn descending_points(n: usize) -> Self {
        let labels = (1..=n as Label).rev().collect();
        Self::from_parts(labels, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// `n - #blocks`.
    pub fn dimension(&self) -> usize {
        self.n() - self.num_blocks()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.sizes.iter().map(|&k| k as usize)
    }

    pub fn blocks(&self) -> Blocks<'_> {
        Blocks {
            labels: &self.labels,
            sizes: &self.sizes,
        }
    }

    pub fn block(&self, i: usize) -> &[Label] {
        let start: usize = self.sizes[..i].iter().map(|&k| k as usize).sum();
        &self.labels[start..start + self.sizes[i] as usize]
    }

    pub fn to_blocks(&self) -> Vec<Vec<Label>> {
        self.blocks().map(<[Label]>::to_vec).collect()
    }

    /// All labels in reading order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }
}

fn contains_label<B: AsRef<[Label]>>(blocks: &[B], x: usize) -> bool {
    blocks
        .iter()
        .any(|b| b.as_ref().iter().any(|&l| l as usize == x))
}

pub struct Blocks<'a> {
    labels: &'a [Label],
    sizes: &'a [u8],
}

impl<'a> Iterator for Blocks<'a> {
    type Item = &'a [Label];

    fn next(&mut self) -> Option<Self::Item> {
        let (&k, rest) = self.sizes.split_first()?;
        let (block, tail) = self.labels.split_at(k as usize);
        self.sizes = rest;
        self.labels = tail;
        Some(block)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.sizes.len(), Some(self.sizes.len()))
    }
}

impl ExactSizeIterator for Blocks<'_> {}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}", block.iter().format(" "))?;
        }
        Ok(())
    }
}

/// Symbols order lexicographically by their canonical text.
impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.labels == other.labels && self.sizes == other.sizes {
            return Ordering::Equal;
        }
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Symbol {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_symbol(s)
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_symbol(&text).map_err(serde::de::Error::custom)
    }
}

fn parse_label(token: &str) -> Result<Label, ParseError> {
    let invalid = || ParseError::InvalidToken {
        token: token.to_string(),
    };
    if token.is_empty() || token.starts_with('0') || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    token.parse::<Label>().map_err(|_| invalid())
}

/// Parses `"3 1|2"`-style text. Whitespace around bars and between labels is
/// tolerated; labels must be decimal integers without leading zeros.
pub fn parse_symbol(text: &str) -> Result<Symbol, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut blocks = Vec::new();
    for (i, part) in text.split('|').enumerate() {
        let block = part
            .split_whitespace()
            .map(parse_label)
            .collect::<Result<Vec<_>, _>>()?;
        if block.is_empty() {
            return Err(ParseError::EmptyBlock { block: i + 1 });
        }
        blocks.push(block);
    }
    Symbol::from_blocks(&blocks)
}

pub fn format_symbol(s: &Symbol) -> String {
    s.to_string()
}

/// Compositions of `n` into parts of size at most `w`, optionally with a fixed
/// number of parts.
pub(crate) fn compositions(n: usize, w: usize, parts: Option<usize>) -> Vec<Vec<u8>> {
    fn go(rest: usize, w: usize, parts: Option<usize>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest == 0 {
            if parts.is_none_or(|k| k == cur.len()) {
                out.push(cur.clone());
            }
            return;
        }
        if parts.is_some_and(|k| cur.len() >= k) {
            return;
        }
        for part in 1..=w.min(rest) {
            cur.push(part as u8);
            go(rest - part, w, parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, w, parts, &mut Vec::new(), &mut out);
    out
}

/// All cells of `cell(n, w)`, or only those of dimension `dim`, sorted by text.
///
/// A dimension outside `0..=n - ceil(n/w)` yields an empty list.
pub fn enumerate_cells(p: StripParams, dim: Option<usize>) -> Vec<Symbol> {
    let parts = match dim {
        Some(d) if d > p.dimension() => return Vec::new(),
        Some(d) => Some(p.n() - d),
        None => None,
    };
    let comps = compositions(p.n(), p.w(), parts);
    let perms: Vec<Vec<Label>> = (1..=p.n() as Label).permutations(p.n()).collect();
    let mut cells: Vec<Symbol> = comps
        .iter()
        .flat_map(|c| {
            perms
                .iter()
                .map(move |perm| Symbol::from_parts(perm.clone(), c.clone()))
        })
        .collect();
    cells.sort_by_cached_key(Symbol::to_string);
    cells
}

/// Codimension-one faces of `s`, with the number of ways each arises.
///
/// A face splits one block into two nonempty subsequences that keep the
/// block's order, first part on the left. Result is sorted by text.
pub fn faces(s: &Symbol) -> Vec<(Symbol, usize)> {
    let mut found: BTreeMap<Symbol, usize> = BTreeMap::new();
    for_each_face(s, |f| *found.entry(f).or_insert(0) += 1);
    found.into_iter().collect()
}

/// Calls `visit` once per derivation of a codimension-one face.
pub(crate) fn for_each_face(s: &Symbol, mut visit: impl FnMut(Symbol)) {
    let mut offset = 0;
    for (b, block) in s.blocks().enumerate() {
        let len = block.len();
        if len >= 2 {
            for mask in 1u64..(1u64 << len) - 1 {
                let mut labels = Vec::with_capacity(s.n());
                labels.extend_from_slice(&s.labels[..offset]);
                labels.extend((0..len).filter(|t| mask >> t & 1 == 1).map(|t| block[t]));
                labels.extend((0..len).filter(|t| mask >> t & 1 == 0).map(|t| block[t]));
                labels.extend_from_slice(&s.labels[offset + len..]);
                let front = mask.count_ones() as u8;
                let mut sizes = Vec::with_capacity(s.num_blocks() + 1);
                sizes.extend_from_slice(&s.sizes[..b]);
                sizes.push(front);
                sizes.push(len as u8 - front);
                sizes.extend_from_slice(&s.sizes[b + 1..]);
                visit(Symbol::from_parts(labels, sizes));
            }
        }
        offset += len;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(t: &str) -> Symbol {
        parse_symbol(t).unwrap()
    }

    fn texts(cells: &[Symbol]) -> Vec<String> {
        cells.iter().map(Symbol::to_string).collect()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(sym("3 1|2").to_blocks(), vec![vec![3, 1], vec![2]]);
        let s = sym("14 10 9 8|13 7 6 5|12 4 3 2|11 1");
        assert_eq!(s.n(), 14);
        assert_eq!(s.num_blocks(), 4);
        assert_eq!(s.block(3), &[11, 1]);
    }

    #[test]
    fn parse_errors_name_the_token() {
        assert_eq!(parse_symbol("1 2|2"), Err(ParseError::DuplicateLabel { label: 2 }));
        assert_eq!(parse_symbol("1||2"), Err(ParseError::EmptyBlock { block: 2 }));
        assert_eq!(parse_symbol("1 2|"), Err(ParseError::EmptyBlock { block: 2 }));
        assert_eq!(
            parse_symbol("1 x"),
            Err(ParseError::InvalidToken { token: "x".into() })
        );
        assert_eq!(
            parse_symbol("01 2"),
            Err(ParseError::InvalidToken { token: "01".into() })
        );
        assert_eq!(
            parse_symbol("1|3"),
            Err(ParseError::MissingLabel {
                label: 3,
                n: 2,
                missing: 2
            })
        );
        assert_eq!(parse_symbol("  "), Err(ParseError::Empty));
        assert!(parse_symbol("0").is_err());
        assert!(parse_symbol("-1 1").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(sym("3 1|2").to_string(), "3 1|2");
        assert_eq!(sym("1|2|3").to_string(), "1|2|3");
        assert_eq!(sym("2 1 3").to_string(), "2 1 3");
        assert_eq!(sym("  3   1 |  2 ").to_string(), "3 1|2");
    }

    #[test]
    fn rejects_width_one() {
        assert!(StripParams::new(3, 1).is_err());
        assert!(StripParams::new(0, 2).is_err());
        assert!(StripParams::new(1, 2).is_ok());
    }

    #[test]
    fn enumerates_small_complexes() {
        let p = StripParams::new(2, 2).unwrap();
        assert_eq!(texts(&enumerate_cells(p, None)), ["1 2", "1|2", "2 1", "2|1"]);

        let p = StripParams::new(3, 2).unwrap();
        assert_eq!(enumerate_cells(p, None).len(), 18);
        assert_eq!(enumerate_cells(p, Some(0)).len(), 6);
        assert_eq!(enumerate_cells(p, Some(1)).len(), 12);
        assert!(enumerate_cells(p, Some(2)).is_empty());

        let p = StripParams::new(3, 3).unwrap();
        assert_eq!(enumerate_cells(p, None).len(), 24);
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(dimension(StripParams::new(3, 2).unwrap()), 1);
        assert_eq!(dimension(StripParams::new(1, 5).unwrap()), 0);
        assert_eq!(dimension(StripParams::new(14, 4).unwrap()), 10);
    }

    #[test]
    fn faces_split_one_block() {
        assert_eq!(
            faces(&sym("1 2|3")),
            vec![(sym("1|2|3"), 1), (sym("2|1|3"), 1)]
        );
        assert_eq!(faces(&sym("1 2")), vec![(sym("1|2"), 1), (sym("2|1"), 1)]);
        assert!(faces(&sym("1|2|3")).is_empty());
        let f = faces(&sym("3 1 2|4"));
        assert_eq!(f.len(), 6);
        assert!(f.contains(&(sym("3 2|1|4"), 1)));
    }

    #[test]
    fn text_order_matches_symbol_order() {
        let p = StripParams::new(4, 3).unwrap();
        let cells = enumerate_cells(p, None);
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
    }
}
