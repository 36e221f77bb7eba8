//! Cup products of degree-one classes in `H^*(conf(n, w); GF(2))`.
//!
//! Classes are written in the basis `ν(f)` indexed by critical cells `f`. The
//! engine multiplies the classes `ν(i j|...)` of the follower-free critical
//! 1-cells with a single doubleton block `(i, j)`, `i > j`. The rules:
//!
//! * a product of degree above `n - ceil(n/w)` vanishes;
//! * `w` or more factors sharing the first label vanish (a column of more
//!   than `w` disks cannot fit across the strip);
//! * two factors sharing the second label vanish (two disks cannot both sit
//!   directly above it);
//! * factors `(i, j_1), ..., (i, j_k)` multiply to the sum over all
//!   orderings of the block `i j_σ(1) ... j_σ(k)`;
//! * products with disjoint labels merge into a single follower-free cell,
//!   with the new block placed where the symbol stays follower-free critical.
//!
//! Products in which a label is the second entry of one factor and the first
//! entry of another are not covered by these rules and are reported as
//! unsupported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::morse::{blocks_follower_free, Classifier, CriticalCell, WheelOrder};
use crate::symbols::{Label, StripParams, Symbol};

/// Sorted list of `(first, second)` generator pairs standing for their product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Label, Label)>);

impl Monomial {
    pub fn new(mut pairs: Vec<(Label, Label)>) -> Self {
        pairs.sort_unstable();
        Self(pairs)
    }

    pub fn pairs(&self) -> &[(Label, Label)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        write!(
            f,
            "{}",
            self.0.iter().map(|(i, j)| format!("ν({i} {j})")).format("·")
        )
    }
}

/// The class `ν(i j|...)` of a follower-free critical 1-cell with doubleton `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    first: Label,
    second: Label,
    cell: CriticalCell,
    params: StripParams,
    order: WheelOrder,
}

impl Generator {
    pub fn first(&self) -> Label {
        self.first
    }

    pub fn second(&self) -> Label {
        self.second
    }

    pub fn cell(&self) -> &CriticalCell {
        &self.cell
    }

    pub fn params(&self) -> StripParams {
        self.params
    }

    pub fn order(&self) -> WheelOrder {
        self.order
    }

    pub fn class(&self) -> CohClass {
        CohClass {
            degree: 1,
            terms: BTreeSet::from([self.cell.clone()]),
            factorization: Some(BTreeSet::from([Monomial(vec![(self.first, self.second)])])),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ν({})", self.cell)
    }
}

/// Builds `ν(i j|...)`: the doubleton `(i, j)` among the remaining labels as
/// descending singletons, at the unique position where the cell is
/// follower-free critical.
pub fn generator(i: Label, j: Label, p: StripParams, order: WheelOrder) -> Result<Generator> {
    let n = p.n();
    if i <= j || j == 0 || i as usize > n {
        return Err(Error::InvalidParams(format!(
            "generator ({i}, {j}) needs n ≥ i > j ≥ 1 with n = {n}"
        )));
    }
    let mut blocks: Vec<Vec<Label>> = (1..=n as Label)
        .rev()
        .filter(|&l| l != i && l != j)
        .map(|l| vec![l])
        .collect();
    insert_block(&mut blocks, &[i, j], order)?;
    let symbol = Symbol::from_blocks(&blocks).expect("partition of 1..n");
    let cell = CriticalCell::new(symbol, p.w(), &Classifier::new(order))
        .expect("follower-free placements are critical");
    Ok(Generator {
        first: i,
        second: j,
        cell,
        params: p,
        order,
    })
}

/// All generators `(i, j)`, `n ≥ i > j ≥ 1`, ordered by `(i, j)` descending.
pub fn all_generators(p: StripParams, order: WheelOrder) -> Result<Vec<Generator>> {
    let n = p.n() as Label;
    (1..=n)
        .rev()
        .flat_map(|i| (1..i).rev().map(move |j| (i, j)))
        .map(|(i, j)| generator(i, j, p, order))
        .collect()
}

/// Inserts `block` into a follower-free cell at the single position that keeps
/// it follower-free critical.
fn insert_block(blocks: &mut Vec<Vec<Label>>, block: &[Label], order: WheelOrder) -> Result<()> {
    let mut found = Vec::new();
    for pos in 0..=blocks.len() {
        blocks.insert(pos, block.to_vec());
        if blocks_follower_free(blocks.iter().map(Vec::as_slice), order) {
            found.push(pos);
        }
        blocks.remove(pos);
    }
    match found[..] {
        [pos] => {
            blocks.insert(pos, block.to_vec());
            Ok(())
        }
        _ => Err(Error::Canonicalization(format!(
            "block {} has {} follower-free critical placements among {} under wheel order {order}",
            block.iter().format(" "),
            found.len(),
            blocks.iter().map(|b| b.iter().format(" ")).format("|")
        ))),
    }
}

/// A homogeneous GF(2) combination of basis classes `ν(f)`.
///
/// Classes produced by the engine remember a factorization into generators
/// (a GF(2) sum of monomials); only such classes can be multiplied further.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    degree: usize,
    terms: BTreeSet<CriticalCell>,
    factorization: Option<BTreeSet<Monomial>>,
}

impl CohClass {
    /// The unit, `ν(n|...|1)`.
    pub fn unit(p: StripParams) -> Self {
        CohClass {
            degree: 0,
            terms: BTreeSet::from([point_cell(p)]),
            factorization: Some(BTreeSet::from([Monomial::default()])),
        }
    }

    pub fn zero(degree: usize) -> Self {
        CohClass {
            degree,
            terms: BTreeSet::new(),
            factorization: Some(BTreeSet::new()),
        }
    }

    /// A class given only by its basis terms. It cannot be multiplied unless zero.
    pub fn from_cells(degree: usize, cells: impl IntoIterator<Item = CriticalCell>) -> Result<Self> {
        let mut terms = BTreeSet::new();
        for c in cells {
            if c.dimension() != degree {
                return Err(Error::InvalidParams(format!("{c} is not of degree {degree}")));
            }
            toggle(&mut terms, c);
        }
        let factorization = terms.is_empty().then(BTreeSet::new);
        Ok(CohClass {
            degree,
            terms,
            factorization,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeSet<CriticalCell> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn factorization(&self) -> Option<&BTreeSet<Monomial>> {
        self.factorization.as_ref()
    }
}

/// Terms in descending text order, leading term first: `"4 2 1|3 + 4 1 2|3"`, or `"0"`.
impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        write!(f, "{}", self.terms.iter().rev().format(" + "))
    }
}

pub(crate) fn point_cell(p: StripParams) -> CriticalCell {
    CriticalCell::new(Symbol::descending_points(p.n()), p.w(), &Classifier::default())
        .expect("the descending point is critical")
}

pub(crate) fn toggle<T: Ord>(set: &mut BTreeSet<T>, item: T) {
    if !set.remove(&item) {
        set.insert(item);
    }
}

/// Evaluates a monomial to its basis terms under `(p, order)`.
pub fn evaluate_monomial(m: &Monomial, p: StripParams, order: WheelOrder) -> Result<BTreeSet<CriticalCell>> {
    let pairs = m.pairs();
    let degree = pairs.len();
    let n = p.n();
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i <= j || j == 0 || i as usize > n) {
        return Err(Error::InvalidParams(format!("({i}, {j}) is not a generator for n = {n}")));
    }
    if degree > p.dimension() {
        return Ok(BTreeSet::new());
    }
    let mut groups: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    for &(i, j) in pairs {
        groups.entry(i).or_default().push(j);
    }
    if groups.values().any(|g| g.len() >= p.w()) {
        return Ok(BTreeSet::new());
    }
    let seconds: Vec<Label> = pairs.iter().map(|&(_, j)| j).collect();
    if seconds.iter().duplicates().next().is_some() {
        return Ok(BTreeSet::new());
    }
    if let Some(&j) = seconds.iter().find(|j| groups.contains_key(j)) {
        return Err(Error::UnsupportedProduct(format!(
            "label {j} is both a first and a second entry in {m}"
        )));
    }

    // Each group (i; j_1..j_k) becomes k! unicycle blocks i j_σ(1)..j_σ(k).
    let group_blocks: Vec<Vec<Vec<Label>>> = groups
        .iter()
        .rev()
        .map(|(&i, js)| {
            js.iter()
                .copied()
                .permutations(js.len())
                .map(|perm| std::iter::once(i).chain(perm).collect())
                .collect()
        })
        .collect();
    let used: BTreeSet<Label> = groups
        .iter()
        .flat_map(|(&i, js)| std::iter::once(i).chain(js.iter().copied()))
        .collect();
    let base: Vec<Vec<Label>> = (1..=n as Label)
        .rev()
        .filter(|l| !used.contains(l))
        .map(|l| vec![l])
        .collect();
    let classifier = Classifier::new(order);
    let mut terms = BTreeSet::new();
    for choice in group_blocks.iter().multi_cartesian_product() {
        let mut blocks = base.clone();
        for block in choice {
            insert_block(&mut blocks, block, order)?;
        }
        let s = Symbol::from_blocks(&blocks).expect("partition of 1..n");
        let cell = CriticalCell::new(s, p.w(), &classifier)
            .ok_or_else(|| Error::Canonicalization("merged cell is not critical".into()))?;
        debug_assert!(cell.follower_free());
        debug_assert_eq!(cell.dimension(), degree);
        toggle(&mut terms, cell);
    }
    if group_blocks.is_empty() {
        terms.insert(point_cell(p));
    }
    Ok(terms)
}

fn check_generators(gens: &[Generator], p: StripParams) -> Result<WheelOrder> {
    let order = gens.first().map_or(WheelOrder::default(), Generator::order);
    for g in gens {
        if g.params != p || g.order != order {
            return Err(Error::InvalidParams(format!(
                "generator {g} belongs to a different complex or wheel order"
            )));
        }
    }
    Ok(order)
}

/// Product of degree-one generators.
pub fn multiply_generators(gens: &[Generator], p: StripParams) -> Result<CohClass> {
    let order = check_generators(gens, p)?;
    let m = Monomial::new(gens.iter().map(|g| (g.first, g.second)).collect());
    let terms = evaluate_monomial(&m, p, order)?;
    let factorization = if terms.is_empty() {
        BTreeSet::new()
    } else {
        BTreeSet::from([m])
    };
    Ok(CohClass {
        degree: gens.len(),
        terms,
        factorization: Some(factorization),
    })
}

/// Cup product of two classes with known factorizations, extended bilinearly.
pub fn multiply_classes(x: &CohClass, y: &CohClass, p: StripParams, order: WheelOrder) -> Result<CohClass> {
    let degree = x.degree + y.degree;
    if x.is_zero() || y.is_zero() {
        return Ok(CohClass::zero(degree));
    }
    let (Some(fx), Some(fy)) = (&x.factorization, &y.factorization) else {
        return Err(Error::UnsupportedProduct(
            "class without a factorization into generators".into(),
        ));
    };
    let mut monomials = BTreeSet::new();
    for (a, b) in fx.iter().cartesian_product(fy) {
        toggle(&mut monomials, a.times(b));
    }
    let mut terms = BTreeSet::new();
    let mut factorization = BTreeSet::new();
    for m in monomials {
        let t = evaluate_monomial(&m, p, order)?;
        if !t.is_empty() {
            for c in t {
                toggle(&mut terms, c);
            }
            factorization.insert(m);
        }
    }
    Ok(CohClass {
        degree,
        terms,
        factorization: Some(factorization),
    })
}
