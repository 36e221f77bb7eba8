//! Batch checks over a suite of `(n, w)` instances.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::homology::{euler_characteristic, CellComplex};
use crate::morse::{Classifier, FollowerThreshold, WheelOrder};
use crate::symbols::StripParams;
use crate::tc::tc_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// `2 ≤ w ≤ n ≤ 5`.
    Quick,
    /// Quick plus `n = 6` for every `w`, and `(7, 2)`.
    Full,
}

impl Suite {
    pub fn instances(self) -> Vec<StripParams> {
        let max_n = match self {
            Suite::Quick => 5,
            Suite::Full => 6,
        };
        let mut out: Vec<StripParams> = (2..=max_n)
            .flat_map(|n| (2..=n).map(move |w| StripParams::new(n, w).unwrap()))
            .collect();
        if self == Suite::Full {
            out.push(StripParams::new(7, 2).unwrap());
        }
        out
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Quick => "quick",
            Suite::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderCheck {
    pub order: String,
    pub critical: Vec<usize>,
    pub matches_betti: bool,
}

/// Everything checked for one instance.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub n: usize,
    pub w: usize,
    pub cells: usize,
    pub dim: usize,
    pub dimension_ok: bool,
    pub boundary_squared_zero: bool,
    pub euler_ok: bool,
    pub betti: Vec<usize>,
    pub orders: Vec<OrderCheck>,
    /// Certified zero-divisor cup length, for `n > w`.
    pub zdcl: Option<usize>,
    pub tc: Option<usize>,
    pub tc_ok: bool,
    pub errors: Vec<String>,
    /// Critical counts under the selected order disagree with Betti numbers,
    /// or the zero-divisor certificate failed.
    pub certification_failed: bool,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.dimension_ok
            && self.boundary_squared_zero
            && self.euler_ok
            && self.tc_ok
            && !self.certification_failed
            && self.errors.is_empty()
    }

    pub fn order_validates(&self, order: WheelOrder) -> bool {
        self.orders
            .iter()
            .any(|o| o.order == order.name() && o.matches_betti)
    }
}

pub fn check_instance(p: StripParams, order: WheelOrder, threshold: FollowerThreshold) -> InstanceReport {
    let cx = CellComplex::new(p);
    let dim = p.dimension();
    let counts = cx.cell_counts();
    let dimension_ok = counts.iter().rposition(|&c| c > 0) == Some(dim);

    let boundaries: Vec<_> = (1..=dim).map(|d| cx.boundary(d).expect("in range")).collect();
    let boundary_squared_zero = boundaries.windows(2).all(|pair| pair[0].mul(&pair[1]).is_zero());

    let betti = cx.betti();
    let euler_ok = betti.euler_characteristic() == cx.euler_characteristic()
        && euler_characteristic(p).ok() == Some(cx.euler_characteristic() as i128)
        && betti.betti.first() == Some(&1);

    let orders: Vec<OrderCheck> = WheelOrder::ALL
        .iter()
        .map(|&o| {
            let critical = Classifier { order: o, threshold }.critical_counts(p);
            OrderCheck {
                order: o.name().to_string(),
                matches_betti: critical == betti.betti,
                critical,
            }
        })
        .collect();
    let selected_ok = orders
        .iter()
        .any(|o| o.order == order.name() && o.matches_betti);

    let mut errors = Vec::new();
    let mut certification_failed = !selected_ok;
    let (mut zdcl, mut tc, mut tc_ok) = (None, None, false);
    match tc_report(p, order) {
        Ok(r) => {
            let m = p.min_blocks();
            let n = p.n();
            let expected = if n > p.w() { 2 * n - 2 * m + 1 } else { 2 * n - 2 };
            tc = r.value;
            tc_ok = r.value == Some(expected) && (n <= p.w() || (r.certified && r.lower == r.upper));
            if r.certified {
                zdcl = Some(r.zdcl);
            }
        }
        Err(e) => {
            if matches!(e, crate::Error::Certification(_) | crate::Error::Canonicalization(_)) {
                certification_failed = true;
            }
            errors.push(e.to_string());
        }
    }

    InstanceReport {
        n: p.n(),
        w: p.w(),
        cells: cx.total_cells(),
        dim,
        dimension_ok,
        boundary_squared_zero,
        euler_ok,
        betti: betti.betti,
        orders,
        zdcl,
        tc,
        tc_ok,
        errors,
        certification_failed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub order: String,
    pub instances: Vec<InstanceReport>,
    /// Wheel orders whose critical counts match Betti numbers on every instance.
    pub validating_orders: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(InstanceReport::passed)
    }

    pub fn certification_failed(&self) -> bool {
        self.instances.iter().any(|i| i.certification_failed)
    }
}

/// Runs every instance (in parallel) and reports them in suite order.
pub fn verify(suite: Suite, order: WheelOrder, threshold: FollowerThreshold) -> SuiteReport {
    let instances: Vec<InstanceReport> = suite
        .instances()
        .into_par_iter()
        .map(|p| check_instance(p, order, threshold))
        .collect();
    let validating_orders = WheelOrder::ALL
        .iter()
        .filter(|&&o| instances.iter().all(|i| i.order_validates(o)))
        .map(|o| o.name().to_string())
        .collect();
    SuiteReport {
        suite,
        order: order.name().to_string(),
        instances,
        validating_orders,
    }
}
