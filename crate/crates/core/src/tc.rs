//! Zero-divisors in `H^*(X) ⊗ H^*(X)` and the topological complexity of `conf(n, w)`.
//!
//! For `n > w`, with `m = ⌈n/w⌉`, two families `a` and `b` of `n - m`
//! generators each are chosen so that the product of all `2(n - m)`
//! zero-divisors `x ⊗ 1 + 1 ⊗ x` is nonzero. This gives
//! `TC > 2(n - m)`, and the dimension of `cell(n, w)` gives `TC ≤ 2(n - m) + 1`.
//!
//! Coefficients are GF(2) throughout, so `1 ⊗ x - x ⊗ 1 = x ⊗ 1 + 1 ⊗ x`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::morse::{CriticalCell, WheelOrder};
use crate::ring::{all_generators, evaluate_monomial, generator, point_cell, toggle, CohClass, Generator, Monomial};
use crate::symbols::{Label, StripParams};

type Pair = (CriticalCell, CriticalCell);

/// Element of the Künneth tensor square, kept both factored (pairs of
/// monomials) and expanded (pairs of basis cells).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    factors: BTreeSet<(Monomial, Monomial)>,
    terms: BTreeSet<Pair>,
}

impl TensorElement {
    /// `1 ⊗ 1`.
    pub fn unit(p: StripParams) -> Self {
        let pt = point_cell(p);
        TensorElement {
            factors: BTreeSet::from([(Monomial::default(), Monomial::default())]),
            terms: BTreeSet::from([(pt.clone(), pt)]),
        }
    }

    pub fn zero() -> Self {
        TensorElement {
            factors: BTreeSet::new(),
            terms: BTreeSet::new(),
        }
    }

    /// `x ⊗ y` for classes with known factorizations.
    pub fn tensor(x: &CohClass, y: &CohClass) -> Result<Self> {
        if x.is_zero() || y.is_zero() {
            return Ok(Self::zero());
        }
        let (Some(fx), Some(fy)) = (x.factorization(), y.factorization()) else {
            return Err(Error::UnsupportedProduct(
                "class without a factorization into generators".into(),
            ));
        };
        let mut factors = BTreeSet::new();
        for (a, b) in fx.iter().cartesian_product(fy) {
            toggle(&mut factors, (a.clone(), b.clone()));
        }
        let mut terms = BTreeSet::new();
        for (a, b) in x.terms().iter().cartesian_product(y.terms()) {
            toggle(&mut terms, (a.clone(), b.clone()));
        }
        Ok(TensorElement { factors, terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeSet<Pair> {
        &self.terms
    }

    pub fn factors(&self) -> &BTreeSet<(Monomial, Monomial)> {
        &self.factors
    }

    /// Bidegrees present among the terms.
    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms
            .iter()
            .map(|(a, b)| (a.dimension(), b.dimension()))
            .collect()
    }

    /// The part of bidegree `(p, q)`.
    pub fn component(&self, p: usize, q: usize) -> Vec<Pair> {
        self.terms
            .iter()
            .filter(|(a, b)| a.dimension() == p && b.dimension() == q)
            .cloned()
            .collect()
    }

    /// Terms as text pairs, leading term first.
    pub fn term_texts(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        write!(
            f,
            "{}",
            self.terms
                .iter()
                .rev()
                .map(|(a, b)| format!("ν({a})⊗ν({b})"))
                .format(" + ")
        )
    }
}

/// `x ⊗ 1 + 1 ⊗ x`; restricts to zero on the diagonal.
pub fn zero_divisor(x: &CohClass, p: StripParams) -> Result<TensorElement> {
    let one = CohClass::unit(p);
    let mut left = TensorElement::tensor(x, &one)?;
    let right = TensorElement::tensor(&one, x)?;
    for f in right.factors {
        toggle(&mut left.factors, f);
    }
    for t in right.terms {
        toggle(&mut left.terms, t);
    }
    Ok(left)
}

/// Caches monomial evaluations for one `(p, order)`.
pub struct TensorRing {
    params: StripParams,
    order: WheelOrder,
    cache: HashMap<Monomial, BTreeSet<CriticalCell>>,
}

impl TensorRing {
    pub fn new(params: StripParams, order: WheelOrder) -> Self {
        Self {
            params,
            order,
            cache: HashMap::new(),
        }
    }

    pub fn params(&self) -> StripParams {
        self.params
    }

    pub fn order(&self) -> WheelOrder {
        self.order
    }

    fn evaluate(&mut self, m: &Monomial) -> Result<&BTreeSet<CriticalCell>> {
        if !self.cache.contains_key(m) {
            let terms = evaluate_monomial(m, self.params, self.order)?;
            self.cache.insert(m.clone(), terms);
        }
        Ok(&self.cache[m])
    }

    /// Componentwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`, extended bilinearly.
    /// Graded signs vanish over GF(2).
    pub fn multiply(&mut self, u: &TensorElement, v: &TensorElement) -> Result<TensorElement> {
        let mut factors = BTreeSet::new();
        for ((l1, r1), (l2, r2)) in u.factors.iter().cartesian_product(&v.factors) {
            toggle(&mut factors, (l1.times(l2), r1.times(r2)));
        }
        let mut terms = BTreeSet::new();
        let mut kept = BTreeSet::new();
        for (l, r) in factors {
            let left = self.evaluate(&l)?.clone();
            if left.is_empty() {
                continue;
            }
            let right = self.evaluate(&r)?;
            if right.is_empty() {
                continue;
            }
            for (a, b) in left.iter().cartesian_product(right) {
                toggle(&mut terms, (a.clone(), b.clone()));
            }
            kept.insert((l, r));
        }
        Ok(TensorElement {
            factors: kept,
            terms,
        })
    }
}

pub fn tensor_multiply(
    u: &TensorElement,
    v: &TensorElement,
    p: StripParams,
    order: WheelOrder,
) -> Result<TensorElement> {
    TensorRing::new(p, order).multiply(u, v)
}

/// The `a` and `b` generator families.
#[derive(Debug, Clone)]
pub struct LemmaFamilies {
    pub a: Vec<Generator>,
    pub b: Vec<Generator>,
    /// `⌈n/w⌉`.
    pub m: usize,
    /// Labels in the last block of the greedy top cell, `n - w(m-1)`.
    pub r: usize,
}

impl LemmaFamilies {
    pub fn a_pairs(&self) -> Vec<(Label, Label)> {
        self.a.iter().map(|g| (g.first(), g.second())).collect()
    }

    pub fn b_pairs(&self) -> Vec<(Label, Label)> {
        self.b.iter().map(|g| (g.first(), g.second())).collect()
    }
}

/// Builds the families. Row `i` of `a` pairs top label `n - i` with `w - 1`
/// consecutive bottom labels (only `r - 1` in the last row); `b` uses the same
/// bottom labels with the top labels rotated by one row.
pub fn lemma_families(p: StripParams, order: WheelOrder) -> Result<LemmaFamilies> {
    let (n, w) = (p.n(), p.w());
    if n <= w {
        return Err(Error::NotApplicable(format!(
            "families need n > w (n = {n}, w = {w}); see the TC report branch"
        )));
    }
    let m = p.min_blocks();
    let r = n - w * (m - 1);
    let mut rows: Vec<Vec<usize>> = (0..m - 1)
        .map(|i| (0..w - 1).map(|j| n - m - (w - 1) * i - j).collect())
        .collect();
    rows.push((0..r - 1).map(|j| n - m - (w - 1) * (m - 1) - j).collect());

    let a_first = |i: usize| n - i;
    let b_first = |i: usize| if i == 0 { n - m + 1 } else { n - i + 1 };
    let build = |first: &dyn Fn(usize) -> usize| -> Result<Vec<Generator>> {
        rows.iter()
            .enumerate()
            .flat_map(|(i, seconds)| seconds.iter().map(move |&s| (first(i), s)))
            .map(|(f, s)| generator(f as Label, s as Label, p, order))
            .collect()
    };
    Ok(LemmaFamilies {
        a: build(&a_first)?,
        b: build(&b_first)?,
        m,
        r,
    })
}

/// Certified zero-divisor product.
#[derive(Debug, Clone)]
pub struct ZdclCertificate {
    pub length: usize,
    pub product: TensorElement,
    /// Bidegree `(n - m, n - m)` component.
    pub witness: Vec<Pair>,
}

/// Multiplies the zero-divisors of both families and checks that the product
/// is nonzero in bidegree `(n - m, n - m)`, and that one more factor kills it.
pub fn zdcl_certificate(p: StripParams, order: WheelOrder) -> Result<ZdclCertificate> {
    let fam = lemma_families(p, order)?;
    let k = p.dimension();
    let mut ring = TensorRing::new(p, order);
    let mut product = TensorElement::unit(p);
    for g in fam.a.iter().chain(&fam.b) {
        product = ring.multiply(&product, &zero_divisor(&g.class(), p)?)?;
    }
    let witness = product.component(k, k);
    if witness.is_empty() {
        return Err(Error::Certification(format!(
            "zero-divisor product vanishes for n = {}, w = {}",
            p.n(),
            p.w()
        )));
    }
    if product.bidegrees() != BTreeSet::from([(k, k)]) {
        return Err(Error::Certification(format!(
            "product has terms outside bidegree ({k}, {k})"
        )));
    }
    for g in all_generators(p, order)? {
        let longer = ring.multiply(&product, &zero_divisor(&g.class(), p)?)?;
        if !longer.is_zero() {
            return Err(Error::Certification(format!(
                "product with one more zero-divisor {g} is nonzero"
            )));
        }
    }
    Ok(ZdclCertificate {
        length: 2 * k,
        product,
        witness,
    })
}

/// Result of the exhaustive search for long zero-divisor products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub length: usize,
    /// False if the node budget ran out before the grading cap was reached.
    pub complete: bool,
    pub nodes: usize,
    /// Generators `(i, j)` whose zero-divisors give the best product found.
    pub factors: Vec<(Label, Label)>,
}

/// Depth-first search over products of zero-divisors `x ⊗ 1 + 1 ⊗ x` of
/// distinct generators. Zero partial products are pruned, as are products
/// the engine cannot evaluate. Stops at the grading cap `2(n - m)`.
pub fn zdcl_search(p: StripParams, order: WheelOrder, budget: usize) -> Result<SearchOutcome> {
    if p.n() <= p.w() {
        return Err(Error::NotApplicable(format!(
            "search needs n > w (n = {}, w = {})",
            p.n(),
            p.w()
        )));
    }
    let gens = all_generators(p, order)?;
    let zds = gens
        .iter()
        .map(|g| zero_divisor(&g.class(), p))
        .collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        ring: TensorRing::new(p, order),
        zds: &zds,
        cap: 2 * p.dimension(),
        budget,
        nodes: 0,
        path: Vec::new(),
        best: Vec::new(),
        exhausted: false,
    };
    search.go(0, &TensorElement::unit(p))?;
    let complete = search.best.len() == search.cap || !search.exhausted;
    Ok(SearchOutcome {
        length: search.best.len(),
        complete,
        nodes: search.nodes,
        factors: search
            .best
            .iter()
            .map(|&i| (gens[i].first(), gens[i].second()))
            .collect(),
    })
}

struct Search<'a> {
    ring: TensorRing,
    zds: &'a [TensorElement],
    cap: usize,
    budget: usize,
    nodes: usize,
    path: Vec<usize>,
    best: Vec<usize>,
    exhausted: bool,
}

impl Search<'_> {
    /// Returns true once the cap is reached or the budget is spent.
    fn go(&mut self, start: usize, current: &TensorElement) -> Result<bool> {
        if self.path.len() > self.best.len() {
            self.best = self.path.clone();
        }
        if self.best.len() == self.cap {
            return Ok(true);
        }
        // Not enough generators left to beat the best.
        if self.path.len() + (self.zds.len() - start) <= self.best.len() {
            return Ok(false);
        }
        for idx in start..self.zds.len() {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return Ok(true);
            }
            self.nodes += 1;
            let next = match self.ring.multiply(current, &self.zds[idx]) {
                Ok(t) => t,
                Err(Error::UnsupportedProduct(_)) => continue,
                Err(e) => return Err(e),
            };
            if next.is_zero() {
                continue;
            }
            self.path.push(idx);
            let stop = self.go(idx + 1, &next)?;
            self.path.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Which case of the formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `n = 1`.
    Contractible,
    /// `1 < n ≤ w`: homotopy equivalent to the planar configuration space.
    PlanarConfig,
    /// `n > w`.
    StripTheorem,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Contractible => "Contractible",
            Branch::PlanarConfig => "PlanarConfig",
            Branch::StripTheorem => "StripTheorem",
        })
    }
}

fn serialize_witness<S: Serializer>(w: &[Pair], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().rev().map(|(a, b)| [a.to_string(), b.to_string()]))
}

/// Topological complexity of `conf(n, w)` (normalized so a point has TC 1).
#[derive(Debug, Clone, Serialize)]
pub struct TcReport {
    pub n: usize,
    pub w: usize,
    pub m: usize,
    pub dim: usize,
    /// Certified zero-divisor cup length when `certified`; otherwise `tc_lower - 1`.
    pub zdcl: usize,
    #[serde(rename = "tc_lower")]
    pub lower: usize,
    #[serde(rename = "tc_upper")]
    pub upper: usize,
    #[serde(rename = "tc")]
    pub value: Option<usize>,
    pub branch: Branch,
    pub certified: bool,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Vec<Pair>,
}

pub fn tc_report(p: StripParams, order: WheelOrder) -> Result<TcReport> {
    let (n, w) = (p.n(), p.w());
    let (m, dim) = (p.min_blocks(), p.dimension());
    let upper = 2 * dim + 1;
    let report = |lower: usize, value: usize, branch, certified, witness| TcReport {
        n,
        w,
        m,
        dim,
        zdcl: lower - 1,
        lower,
        upper,
        value: Some(value),
        branch,
        certified,
        witness,
    };
    Ok(if n == 1 {
        report(1, 1, Branch::Contractible, false, Vec::new())
    } else if n <= w {
        report(2 * n - 2, 2 * n - 2, Branch::PlanarConfig, false, Vec::new())
    } else {
        let cert = zdcl_certificate(p, order)?;
        let lower = cert.length + 1;
        let mut r = report(lower, lower, Branch::StripTheorem, true, cert.witness);
        if lower != upper {
            r.value = None;
            r.certified = false;
        }
        r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SA: WheelOrder = WheelOrder::SizeThenAxle;

    fn params(n: usize, w: usize) -> StripParams {
        StripParams::new(n, w).unwrap()
    }

    fn zd(i: Label, j: Label, p: StripParams) -> TensorElement {
        zero_divisor(&generator(i, j, p, SA).unwrap().class(), p).unwrap()
    }

    fn pairs(e: &TensorElement) -> Vec<(String, String)> {
        e.term_texts()
    }

    fn strs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn unit_zero_divisor_vanishes() {
        let p = params(3, 2);
        assert!(zero_divisor(&CohClass::unit(p), p).unwrap().is_zero());
    }

    #[test]
    fn square_of_zero_divisor_vanishes() {
        let p = params(3, 2);
        let x = zd(3, 1, p);
        assert!(tensor_multiply(&x, &x, p, SA).unwrap().is_zero());
    }

    #[test]
    fn product_of_two_zero_divisors() {
        let p = params(3, 2);
        let e = tensor_multiply(&zd(3, 1, p), &zd(2, 1, p), p, SA).unwrap();
        assert_eq!(pairs(&e), strs(&[("3 1|2", "2 1|3"), ("2 1|3", "3 1|2")]));
    }

    #[test]
    fn left_times_right_is_tensor() {
        let p = params(5, 2);
        let x = generator(5, 2, p, SA).unwrap().class();
        let y = generator(4, 1, p, SA).unwrap().class();
        let one = CohClass::unit(p);
        let xl = TensorElement::tensor(&x, &one).unwrap();
        let yr = TensorElement::tensor(&one, &y).unwrap();
        let prod = tensor_multiply(&xl, &yr, p, SA).unwrap();
        assert_eq!(prod, TensorElement::tensor(&x, &y).unwrap());
    }

    #[test]
    fn families() {
        let f = lemma_families(params(3, 2), SA).unwrap();
        assert_eq!((f.a_pairs(), f.b_pairs()), (vec![(3, 1)], vec![(2, 1)]));
        let f = lemma_families(params(5, 2), SA).unwrap();
        assert_eq!(f.a_pairs(), [(5, 2), (4, 1)]);
        assert_eq!(f.b_pairs(), [(3, 2), (5, 1)]);
        let f = lemma_families(params(4, 3), SA).unwrap();
        assert_eq!(f.a_pairs(), [(4, 2), (4, 1)]);
        assert_eq!(f.b_pairs(), [(3, 2), (3, 1)]);
        assert!(matches!(
            lemma_families(params(3, 3), SA),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn certificate_three_two() {
        let c = zdcl_certificate(params(3, 2), SA).unwrap();
        assert_eq!(c.length, 2);
        assert_eq!(pairs(&c.product), strs(&[("3 1|2", "2 1|3"), ("2 1|3", "3 1|2")]));
    }

    #[test]
    fn certificate_five_two() {
        let c = zdcl_certificate(params(5, 2), SA).unwrap();
        assert_eq!(c.length, 4);
        assert_eq!(
            pairs(&c.product),
            strs(&[("5 2|4 1|3", "5 1|3 2|4"), ("5 1|3 2|4", "5 2|4 1|3")])
        );
    }

    #[test]
    fn reports() {
        let r = tc_report(params(1, 4), SA).unwrap();
        assert_eq!((r.value, r.branch), (Some(1), Branch::Contractible));
        let r = tc_report(params(3, 5), SA).unwrap();
        assert_eq!((r.value, r.branch), (Some(4), Branch::PlanarConfig));
        let r = tc_report(params(5, 2), SA).unwrap();
        assert_eq!((r.lower, r.upper, r.value), (5, 5, Some(5)));
        assert!(r.certified);
        assert_eq!(tc_report(params(4, 3), SA).unwrap().value, Some(5));
    }

    #[test]
    fn search_small() {
        for (n, w, expect) in [(3, 2, 2), (4, 3, 4), (5, 2, 4)] {
            let out = zdcl_search(params(n, w), SA, 1_000_000).unwrap();
            assert_eq!(out.length, expect, "({n},{w})");
            assert!(out.complete);
        }
    }

    #[test]
    fn search_budget_exhaustion() {
        let out = zdcl_search(params(5, 2), SA, 1).unwrap();
        assert!(out.length < 4);
        assert!(!out.complete);
    }
}
