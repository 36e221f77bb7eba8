//! Critical cells of the discrete gradient on `cell(n, w)`.
//!
//! Each block decomposes into wheels: an entry is an axle when it exceeds
//! everything before it in the block, and its wheel runs until the next axle.
//! A block with one wheel is a unicycle. Scanning left to right, block `i+1`
//! is a follower when block `i` is a unicycle that is not itself a follower
//! and whose wheel is smaller than every wheel of block `i+1`. A cell is
//! critical when every block is either a non-follower unicycle, or a follower
//! that together with its leader holds at least `w + 1` labels.
//!
//! Only the critical cells are computed here; the matching itself is not built.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symbols::{enumerate_cells, Label, StripParams, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wheel {
    entries: Vec<Label>,
}

impl Wheel {
    pub fn axle(&self) -> Label {
        self.entries[0]
    }

    pub fn entries(&self) -> &[Label] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

/// Splits a block at its running maxima.
pub fn wheel_decompose(block: &[Label]) -> Vec<Wheel> {
    let mut wheels: Vec<Wheel> = Vec::new();
    for &x in block {
        match wheels.last_mut() {
            Some(w) if x < w.axle() => w.entries.push(x),
            _ => wheels.push(Wheel { entries: vec![x] }),
        }
    }
    wheels
}

fn is_unicycle(block: &[Label]) -> bool {
    block.iter().skip(1).all(|&x| x < block[0])
}

/// How wheels compare when deciding followers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum WheelOrder {
    /// Larger wheels are bigger; equal sizes compare by axle.
    #[default]
    SizeThenAxle,
    /// Compare axles only.
    AxleOnly,
}

impl WheelOrder {
    pub const ALL: [WheelOrder; 2] = [WheelOrder::SizeThenAxle, WheelOrder::AxleOnly];

    pub fn compare(self, a: &Wheel, b: &Wheel) -> Ordering {
        match self {
            WheelOrder::SizeThenAxle => (a.size(), a.axle()).cmp(&(b.size(), b.axle())),
            WheelOrder::AxleOnly => a.axle().cmp(&b.axle()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WheelOrder::SizeThenAxle => "size-axle",
            WheelOrder::AxleOnly => "axle",
        }
    }
}

impl fmt::Display for WheelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minimum combined size of a follower and its leader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FollowerThreshold {
    /// `w + 1`.
    #[default]
    WidthPlusOne,
    /// `w`. A deliberately wrong rule, kept as a negative control.
    Width,
}

impl FollowerThreshold {
    pub fn required(self, w: usize) -> usize {
        match self {
            FollowerThreshold::WidthPlusOne => w + 1,
            FollowerThreshold::Width => w,
        }
    }
}

/// Wheel order plus follower threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Classifier {
    pub order: WheelOrder,
    pub threshold: FollowerThreshold,
}

impl Classifier {
    pub fn new(order: WheelOrder) -> Self {
        Self {
            order,
            threshold: FollowerThreshold::WidthPlusOne,
        }
    }

    pub fn classify(&self, s: &Symbol, w: usize) -> Classification {
        let blocks: Vec<&[Label]> = s.blocks().collect();
        let wheels: Vec<Vec<Wheel>> = blocks.iter().map(|b| wheel_decompose(b)).collect();
        let required = self.threshold.required(w);
        let mut status = Vec::with_capacity(blocks.len());
        let mut prev_leads = false;
        for i in 0..blocks.len() {
            let follower = i > 0 && prev_leads && {
                let leader = &wheels[i - 1][0];
                wheels[i]
                    .iter()
                    .all(|wh| self.order.compare(leader, wh) == Ordering::Less)
            };
            let st = if follower {
                let combined = blocks[i].len() + blocks[i - 1].len();
                if combined >= required {
                    BlockStatus::Follower { combined }
                } else {
                    BlockStatus::ShortFollower { combined }
                }
            } else if wheels[i].len() == 1 {
                BlockStatus::Unicycle
            } else {
                BlockStatus::NotUnicycle {
                    wheels: wheels[i].len(),
                }
            };
            prev_leads = !follower && wheels[i].len() == 1;
            status.push(st);
        }
        Classification {
            critical: status.iter().all(BlockStatus::admissible),
            blocks: status,
            required,
        }
    }

    pub fn is_critical(&self, s: &Symbol, w: usize) -> bool {
        self.classify(s, w).critical
    }

    /// Critical cells of `cell(n, w)` in enumeration order.
    pub fn critical_cells(&self, p: StripParams, dim: Option<usize>) -> Vec<CriticalCell> {
        enumerate_cells(p, dim)
            .into_iter()
            .filter_map(|s| {
                let c = self.classify(&s, p.w());
                c.critical.then(|| CriticalCell::from_classification(s, &c))
            })
            .collect()
    }

    /// Number of critical cells in each dimension `0..=dim(cell(n,w))`.
    pub fn critical_counts(&self, p: StripParams) -> Vec<usize> {
        let mut counts = vec![0; p.dimension() + 1];
        for s in enumerate_cells(p, None) {
            if self.is_critical(&s, p.w()) {
                counts[s.dimension()] += 1;
            }
        }
        counts
    }
}

/// Why a block does or does not pass the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStatus {
    Unicycle,
    Follower { combined: usize },
    ShortFollower { combined: usize },
    NotUnicycle { wheels: usize },
}

impl BlockStatus {
    pub fn admissible(&self) -> bool {
        matches!(self, BlockStatus::Unicycle | BlockStatus::Follower { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub critical: bool,
    pub blocks: Vec<BlockStatus>,
    required: usize,
}

impl Classification {
    /// One line per block, e.g. "block 2 is a follower of block 1, combined size 3 ≥ 3".
    pub fn reasons(&self) -> Vec<String> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let k = i + 1;
                match *st {
                    BlockStatus::Unicycle => format!("block {k} is a unicycle and not a follower"),
                    BlockStatus::Follower { combined } => format!(
                        "block {k} is a follower of block {}, combined size {combined} ≥ {}",
                        k - 1,
                        self.required
                    ),
                    BlockStatus::ShortFollower { combined } => format!(
                        "block {k} is a follower of block {}, combined size {combined} < {}",
                        k - 1,
                        self.required
                    ),
                    BlockStatus::NotUnicycle { wheels } => format!(
                        "block {k} has {wheels} wheels and is not a follower"
                    ),
                }
            })
            .collect()
    }
}

/// Role of a block inside a critical cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockRole {
    NonFollowerUnicycle,
    Follower,
}

/// A critical cell together with its block roles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalCell {
    symbol: Symbol,
    roles: Vec<BlockRole>,
}

impl CriticalCell {
    fn from_classification(symbol: Symbol, c: &Classification) -> Self {
        let roles = c
            .blocks
            .iter()
            .map(|st| match st {
                BlockStatus::Follower { .. } => BlockRole::Follower,
                _ => BlockRole::NonFollowerUnicycle,
            })
            .collect();
        Self { symbol, roles }
    }

    /// Returns `None` if `symbol` is not critical for `classifier`.
    pub fn new(symbol: Symbol, w: usize, classifier: &Classifier) -> Option<Self> {
        let c = classifier.classify(&symbol, w);
        c.critical.then(|| Self::from_classification(symbol, &c))
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn follower_flags(&self) -> &[BlockRole] {
        &self.roles
    }

    pub fn follower_free(&self) -> bool {
        self.roles.iter().all(|&r| r == BlockRole::NonFollowerUnicycle)
    }

    pub fn dimension(&self) -> usize {
        self.symbol.dimension()
    }
}

impl Ord for CriticalCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbol.cmp(&other.symbol)
    }
}

impl PartialOrd for CriticalCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CriticalCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbol.fmt(f)
    }
}

impl Serialize for CriticalCell {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.symbol.serialize(serializer)
    }
}

/// Classification with the given wheel order and the `w + 1` follower rule.
pub fn is_critical(s: &Symbol, w: usize, order: WheelOrder) -> Classification {
    Classifier::new(order).classify(s, w)
}

pub fn critical_cells(p: StripParams, dim: Option<usize>, order: WheelOrder) -> Vec<CriticalCell> {
    Classifier::new(order).critical_cells(p, dim)
}

/// A follower-free critical cell has only unicycle blocks whose wheels strictly
/// decrease from left to right.
pub(crate) fn blocks_follower_free<'a>(
    blocks: impl IntoIterator<Item = &'a [Label]>,
    order: WheelOrder,
) -> bool {
    let mut prev: Option<Wheel> = None;
    for block in blocks {
        if !is_unicycle(block) {
            return false;
        }
        let wheel = Wheel {
            entries: block.to_vec(),
        };
        if let Some(p) = &prev {
            if order.compare(p, &wheel) == Ordering::Less {
                return false;
            }
        }
        prev = Some(wheel);
    }
    true
}
