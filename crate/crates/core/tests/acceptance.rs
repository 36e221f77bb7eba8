//! Acceptance criteria. Run with `--nocapture` to see one line per criterion.
//!
//! All checks are exact integer or set equalities; there are no tolerances.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use diskstrip::homology::CellComplex;
use diskstrip::morse::{Classifier, FollowerThreshold};
use diskstrip::ring::{all_generators, multiply_classes, multiply_generators, CohClass, Generator};
use diskstrip::symbols::{enumerate_cells, parse_symbol};
use diskstrip::tc::{tc_report, zdcl_certificate, Branch};
use diskstrip::verify::{verify, Suite};
use diskstrip::{Error, StripParams, WheelOrder};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;

const SUITE: [(usize, usize); 11] = [
    (3, 2),
    (4, 2),
    (4, 3),
    (5, 2),
    (5, 3),
    (5, 4),
    (6, 2),
    (6, 3),
    (6, 4),
    (6, 5),
    (7, 2),
];

const TIME_LIMIT: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Products = (CohClass, CohClass, CohClass, CohClass, CohClass);

fn params(n: usize, w: usize) -> StripParams {
    StripParams::new(n, w).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tc_formula() -> Outcome {
    let start = Instant::now();
    for (n, w) in SUITE {
        let r = tc_report(params(n, w), WheelOrder::SizeThenAxle).map_err(|e| format!("({n},{w}): {e}"))?;
        let m = n.div_ceil(w);
        let expected = 2 * n - 2 * m + 1;
        ensure(
            r.value == Some(expected) && r.lower == expected && r.upper == expected && r.certified,
            || format!("({n},{w}): got {r:?}, expected {expected}"),
        )?;
        ensure(r.branch == Branch::StripTheorem, || format!("({n},{w}) branch {}", r.branch))?;
    }
    let elapsed = start.elapsed();
    let report = verify(Suite::Full, WheelOrder::SizeThenAxle, FollowerThreshold::WidthPlusOne);
    let total = start.elapsed();
    ensure(report.passed(), || "full verify suite failed".into())?;
    ensure(total <= TIME_LIMIT, || format!("full suite took {total:?}"))?;
    Ok(format!(
        "TC = 2n-2⌈n/w⌉+1 certified on {} instances ({elapsed:.2?}); full suite {total:.2?}",
        SUITE.len()
    ))
}

fn dimension() -> Outcome {
    for (n, w) in SUITE {
        let p = params(n, w);
        let max = enumerate_cells(p, None).iter().map(|s| s.dimension()).max().unwrap();
        ensure(p.dimension() == n - n.div_ceil(w) && max == p.dimension(), || {
            format!("({n},{w}): formula {} enumerated max {max}", p.dimension())
        })?;
    }
    Ok("dimension = n-⌈n/w⌉ = max enumerated cell dimension".into())
}

fn morse_matches_homology() -> Outcome {
    let instances: Vec<(usize, usize)> = std::iter::once((2, 2)).chain(SUITE).collect();
    let mut validating: Vec<WheelOrder> = WheelOrder::ALL.to_vec();
    for &(n, w) in &instances {
        let p = params(n, w);
        let betti = CellComplex::new(p).betti().betti;
        for order in WheelOrder::ALL {
            if Classifier::new(order).critical_counts(p) != betti {
                validating.retain(|&o| o != order);
            }
        }
        if (n, w) == (3, 2) {
            ensure(betti == [1, 7], || format!("(3,2) betti {betti:?}"))?;
        }
        if (n, w) == (2, 2) {
            ensure(betti == [1, 1], || format!("(2,2) betti {betti:?}"))?;
        }
    }
    ensure(
        validating == [WheelOrder::SizeThenAxle],
        || format!("validating wheel orders: {validating:?}"),
    )?;
    Ok(format!(
        "#critical j-cells = β_j on {} instances; only size-axle validates",
        instances.len()
    ))
}

fn chain_complex() -> Outcome {
    for (n, w) in SUITE {
        let cx = CellComplex::new(params(n, w));
        for d in 2..=cx.dimension() {
            let dd = cx.boundary(d - 1).unwrap().mul(&cx.boundary(d).unwrap());
            ensure(dd.is_zero(), || format!("({n},{w}): ∂∂ ≠ 0 in dim {d}"))?;
        }
        let b = cx.betti();
        ensure(b.euler_characteristic() == cx.euler_characteristic(), || {
            format!("({n},{w}): Euler mismatch")
        })?;
    }
    Ok("∂∘∂ = 0 and Euler characteristics agree".into())
}

fn witness_texts(n: usize, w: usize) -> Result<BTreeSet<(String, String)>, String> {
    let c = zdcl_certificate(params(n, w), WheelOrder::SizeThenAxle).map_err(|e| e.to_string())?;
    ensure(c.length == 2 * params(n, w).dimension(), || format!("({n},{w}) length {}", c.length))?;
    Ok(c.witness
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect())
}

fn pairs(v: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn zdcl_certificates() -> Outcome {
    for (n, w) in SUITE {
        // Checks the top bidegree is nonzero and one more zero-divisor kills it.
        zdcl_certificate(params(n, w), WheelOrder::SizeThenAxle).map_err(|e| format!("({n},{w}): {e}"))?;
    }
    let expected_32 = pairs(&[("3 1|2", "2 1|3"), ("2 1|3", "3 1|2")]);
    let expected_52 = pairs(&[("5 2|4 1|3", "5 1|3 2|4"), ("5 1|3 2|4", "5 2|4 1|3")]);
    // a-family {(4,2),(4,1)} gives 4 2 1|3 + 4 1 2|3, b-family {(3,2),(3,1)} gives
    // 3 2 1|4 + 3 1 2|4; the mixed splits {(4,2),(3,1)} | {(4,1),(3,2)} survive too.
    let a43 = ["4 2 1|3", "4 1 2|3"];
    let b43 = ["3 2 1|4", "3 1 2|4"];
    let mut expected_43 = pairs(&[("4 2|3 1", "4 1|3 2"), ("4 1|3 2", "4 2|3 1")]);
    for a in a43 {
        for b in b43 {
            expected_43.insert((a.into(), b.into()));
            expected_43.insert((b.into(), a.into()));
        }
    }
    for ((n, w), expected) in [((3, 2), expected_32), ((5, 2), expected_52), ((4, 3), expected_43)] {
        let got = witness_texts(n, w)?;
        ensure(got == expected, || format!("({n},{w}) witness {got:?}"))?;
    }
    Ok("products of 2(n-⌈n/w⌉) zero-divisors nonzero, longer ones zero; witnesses match".into())
}

/// Checks one triple of generators. Returns false if some product is unsupported.
fn check_triple(g: [&Generator; 3], p: StripParams) -> Result<bool, String> {
    let o = WheelOrder::SizeThenAxle;
    let [a, b, c] = g.map(Generator::class);
    let prod = |x: &CohClass, y: &CohClass| multiply_classes(x, y, p, o);
    let results = (|| -> Result<Products, Error> {
        let ab = prod(&a, &b)?;
        let ba = prod(&b, &a)?;
        let bc = prod(&b, &c)?;
        let left = prod(&ab, &c)?;
        let right = prod(&a, &bc)?;
        let direct = multiply_generators(&[g[0].clone(), g[1].clone(), g[2].clone()], p)?;
        Ok((ab, ba, left, right, direct))
    })();
    let (ab, ba, left, right, direct) = match results {
        Ok(r) => r,
        Err(Error::UnsupportedProduct(_)) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let names = || format!("{} {} {}", g[0], g[1], g[2]);
    ensure(ab.terms() == ba.terms(), || format!("not commutative: {}", names()))?;
    ensure(left.terms() == right.terms(), || format!("not associative: {}", names()))?;
    ensure(left.terms() == direct.terms(), || format!("class product differs: {}", names()))?;
    ensure(direct.degree() == 3 && ab.degree() == 2, || format!("degree: {}", names()))?;
    for t in direct.terms().iter().chain(ab.terms()) {
        ensure(t.follower_free(), || format!("{t} not follower-free"))?;
        ensure(t.dimension() <= p.dimension(), || format!("{t} above top degree"))?;
    }
    // Vanishing rules.
    let firsts = g.map(Generator::first);
    let seconds = g.map(Generator::second);
    let repeated_second = seconds[0] == seconds[1] || seconds[1] == seconds[2] || seconds[0] == seconds[2];
    let same_first = firsts[0] == firsts[1] && firsts[1] == firsts[2];
    if repeated_second || (same_first && p.w() <= 3) || p.dimension() < 3 {
        ensure(direct.is_zero(), || format!("should vanish: {}", names()))?;
    }
    let pair_same_first = firsts[0] == firsts[1];
    if seconds[0] == seconds[1] || (pair_same_first && p.w() <= 2) || p.dimension() < 2 {
        ensure(ab.is_zero(), || format!("should vanish: {} {}", g[0], g[1]))?;
    }
    Ok(true)
}

fn ring_properties() -> Outcome {
    let mut checked = 0usize;
    for n in 3..=5 {
        for w in 2..=n {
            let p = params(n, w);
            let gens = all_generators(p, WheelOrder::SizeThenAxle).map_err(|e| e.to_string())?;
            for a in &gens {
                for b in &gens {
                    for c in &gens {
                        if check_triple([a, b, c], p)? {
                            checked += 1;
                        }
                    }
                }
            }
            // w same-first generators vanish whenever there are enough seconds.
            for i in (w + 1)..=n {
                let column: Vec<Generator> = gens.iter().filter(|g| g.first() as usize == i).take(w).cloned().collect();
                if column.len() == w {
                    let prod = multiply_generators(&column, p).map_err(|e| e.to_string())?;
                    ensure(prod.is_zero(), || format!("({n},{w}): column of {i} nonzero"))?;
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(20_261_017);
    for (n, w) in [(6, 2), (6, 3), (6, 4), (7, 2), (7, 3), (7, 5)] {
        let p = params(n, w);
        let gens = all_generators(p, WheelOrder::SizeThenAxle).map_err(|e| e.to_string())?;
        for _ in 0..2_000 {
            let t: Vec<&Generator> = (0..3).map(|_| gens.choose(&mut rng).unwrap()).collect();
            if check_triple([t[0], t[1], t[2]], p)? {
                checked += 1;
            }
        }
    }
    Ok(format!("commutative, associative, graded, follower-free, vanishing rules ({checked} supported triples)"))
}

fn negative_controls() -> Outcome {
    for w in [0, 1] {
        ensure(StripParams::new(4, w).is_err(), || format!("w = {w} accepted"))?;
    }
    for bad in ["1 2|2", "1||2", "", "1 x", "01 2", "1|3", "0"] {
        ensure(parse_symbol(bad).is_err(), || format!("{bad:?} accepted"))?;
    }
    let tampered = verify(Suite::Quick, WheelOrder::SizeThenAxle, FollowerThreshold::Width);
    ensure(tampered.certification_failed(), || "tampered threshold still matches Betti numbers".into())?;
    ensure(tampered.validating_orders.is_empty(), || "a wheel order validated under tampering".into())?;
    let bad = Classifier {
        order: WheelOrder::SizeThenAxle,
        threshold: FollowerThreshold::Width,
    };
    ensure(bad.critical_counts(params(3, 2)) != [1, 7], || "tampered (3,2) counts match".into())?;
    Ok("w ≤ 1 and malformed symbols rejected; follower threshold w breaks the Betti match".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 7] = [
        ("1 TC formula", tc_formula),
        ("2 dimension", dimension),
        ("3 Morse/homology cross-validation", morse_matches_homology),
        ("4 chain-complex soundness", chain_complex),
        ("5 zdcl certificate", zdcl_certificates),
        ("6 ring-engine properties", ring_properties),
        ("7 negative controls", negative_controls),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(msg) => println!("[PASS] criterion {name}: {msg}"),
            Err(msg) => {
                println!("[FAIL] criterion {name}: {msg}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
