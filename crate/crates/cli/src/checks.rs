//! Self-checks behind `check all` and `moments paper-check`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use randtensor::bounds::{critical_z, narayana_gf, rainbow_closed_form, sd_bounds_k1, sd_upper_tensor, trace_theorem_bounds, RainbowIter};
use randtensor::combinatorics::{beta_eval_f64, falling};
use randtensor::moments::{gaussian_sandwich_floor, ReferenceTable};
use randtensor::reduction::{narayana_decode, narayana_encode, AbPair};
use randtensor::sim::MpLaw;
use randtensor::{classify, enumerate_partitions, narayana, MomentEngine, MomentQuery, ReductionClass, Result};

/// `p ∈ 1..=6`, `d ∈ {2,3,4}`, `k ∈ 1..=3`.
const PS: std::ops::RangeInclusive<u64> = 1..=6;
const DS: [u64; 3] = [2, 3, 4];
const KS: std::ops::RangeInclusive<u32> = 1..=3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, failures: Vec<String>, cases: usize) -> Self {
        let detail = match failures.first() {
            None => format!("{cases} cases"),
            Some(first) => format!("{} of {cases} cases failed, first: {first}", failures.len()),
        };
        CheckOutcome {
            name,
            passed: failures.is_empty(),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: usize,
    pub cases: usize,
    pub mismatches: usize,
    pub first: Option<String>,
}

fn ratio(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow(b: &BigRational, e: u32) -> BigRational {
    num_traits::pow(b.clone(), e as usize)
}

/// Engine against a tabulated closed form over the standard grid.
pub fn paper_check(table: ReferenceTable, max_m: usize) -> Result<Vec<TableRow>> {
    if max_m == 0 || max_m > ReferenceTable::MAX_M {
        return Err(randtensor::Error::Domain(format!(
            "closed forms exist for 1 <= m <= {}, got --max-m {max_m}",
            ReferenceTable::MAX_M
        )));
    }
    let engine = MomentEngine::new();
    (1..=max_m)
        .map(|m| {
            let mut row = TableRow {
                m,
                cases: 0,
                mismatches: 0,
                first: None,
            };
            for p in PS {
                for d in DS {
                    for k in KS {
                        let exact = engine.ensemble_moment(&MomentQuery::normalized(p, d, k, m))?.total;
                        let closed = table.evaluate(m, p, d, k)?;
                        row.cases += 1;
                        if exact != closed {
                            row.mismatches += 1;
                            row.first
                                .get_or_insert_with(|| format!("p={p} d={d} k={k}: engine {exact}, table {closed}"));
                        }
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

fn moment_table() -> Result<CheckOutcome> {
    let rows = paper_check(ReferenceTable::Literature, ReferenceTable::MAX_M)?;
    let cases: usize = rows.iter().map(|r| r.cases).sum();
    let bad: usize = rows.iter().map(|r| r.mismatches).sum();
    let first = rows.iter().find_map(|r| r.first.as_ref().map(|f| format!("m={} {f}", r.m)));
    Ok(CheckOutcome {
        name: "moment-table",
        passed: bad == 0,
        detail: match first {
            None => format!("{cases} cases"),
            Some(f) => format!("{bad} of {cases} cases failed, first: {f}"),
        },
    })
}

fn gaussian_sandwich() -> Result<CheckOutcome> {
    let engine = MomentEngine::new();
    let mut failures = vec![];
    let mut cases = 0;
    for m in 1..=6 {
        for p in PS {
            for d in DS {
                for k in KS {
                    let e = engine.ensemble_moment(&MomentQuery::normalized(p, d, k, m))?.total;
                    let g = engine.ensemble_moment(&MomentQuery::gaussian(p, d, k, m))?.total;
                    cases += 1;
                    if !(gaussian_sandwich_floor(m, d, k) * &g <= e && e <= g) {
                        failures.push(format!("m={m} p={p} d={d} k={k}"));
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::new("gaussian-sandwich", failures, cases))
}

fn trace_bounds() -> Result<CheckOutcome> {
    let engine = MomentEngine::new();
    let mut failures = vec![];
    let mut cases = 0;
    for m in 1..=6 {
        for p in PS {
            for d in DS {
                for k in KS {
                    let e = engine.ensemble_moment(&MomentQuery::normalized(p, d, k, m))?.normalized;
                    cases += 1;
                    if !trace_theorem_bounds(p, d, k, m)?.contains(&e, 1e-10) {
                        failures.push(format!("m={m} p={p} d={d} k={k}"));
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::new("trace-bounds", failures, cases))
}

fn class_sums() -> Result<CheckOutcome> {
    let engine = MomentEngine::new();
    let mut failures = vec![];
    let mut cases = 0;
    for m in 1..=6usize {
        for p in PS {
            for d in DS {
                for k in KS {
                    let q = MomentQuery::normalized(p, d, k, m);
                    let dk = pow(&ratio(d), k);
                    let cr = engine.class_sum(&q, ReductionClass::CompletelyReducible)?;
                    let formula = (1..=m).fold(BigRational::zero(), |acc, l| {
                        let n = narayana(m as u64, l as i64).expect("l <= m");
                        acc + BigRational::from_integer(BigInt::from(n) * BigInt::from(falling(p, l as u64)))
                            / pow(&dk, l as u32)
                    }) * &dk;
                    cases += 1;
                    if cr != formula {
                        failures.push(format!("reducible m={m} p={p} d={d} k={k}"));
                    }
                    if m == 4 {
                        let irr = engine.class_sum(&q, ReductionClass::Irreducible)?;
                        let expect = pow(&ratio(2), k) * BigRational::from_integer(falling(p, 2).into())
                            / pow(&(ratio(d) * ratio(d + 1)), k);
                        cases += 1;
                        if irr != expect {
                            failures.push(format!("irreducible m=4 p={p} d={d} k={k}"));
                        }
                    }
                    if m % 2 == 0 && ((m * m) as u64) < p {
                        let irr = engine.class_sum(&q, ReductionClass::Irreducible)?.to_f64().unwrap();
                        let x = p as f64 / (d as f64).powi(k as i32);
                        let floor = x.powf(m as f64 / 2.0) * (-((m * m) as f64) / (2.0 * p as f64)).exp();
                        cases += 1;
                        if irr < floor - 1e-10 {
                            failures.push(format!("irreducible floor m={m} p={p} d={d} k={k}: {irr:.6} < {floor:.6}"));
                        }
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::new("class-sums", failures, cases))
}

fn bijection() -> Result<CheckOutcome> {
    let mut failures = vec![];
    let mut cases = 0;
    for m in 1..=10usize {
        let mut counts = vec![0u64; m + 1];
        for s in enumerate_partitions(m, Some(m))? {
            if classify(s.word())? == ReductionClass::CompletelyReducible {
                counts[s.block_count()] += 1;
                cases += 1;
                if narayana_decode(&narayana_encode(&s)?, m)? != s {
                    failures.push(format!("round trip {:?}", s.word()));
                }
            }
        }
        for (l, &count) in counts.iter().enumerate().skip(1) {
            let n = narayana(m as u64, l as i64)?;
            let pairs = AbPair::enumerate(m, l).len() as u64;
            cases += 1;
            if n != count.into() || n != pairs.into() {
                failures.push(format!("m={m} l={l}: {count} words, {pairs} pairs, N={n}"));
            }
        }
    }
    Ok(CheckOutcome::new("bijection", failures, cases))
}

fn schwinger_dyson() -> Result<CheckOutcome> {
    let engine = MomentEngine::new();
    let mut failures = vec![];
    let mut cases = 0;
    for p in 2..=6u64 {
        for d in DS {
            let k1 = sd_bounds_k1(p, d, 6)?;
            let tensor = sd_upper_tensor(p, d, 2, 6)?;
            for m in 1..=6 {
                let e1 = engine.ensemble_moment(&MomentQuery::normalized(p, d, 1, m))?.normalized;
                let e2 = engine.ensemble_moment(&MomentQuery::normalized(p, d, 2, m))?.normalized;
                cases += 2;
                if !(k1.lower(m) <= &e1 && &e1 <= k1.upper(m)) {
                    failures.push(format!("k=1 m={m} p={p} d={d}"));
                }
                if &e2 > tensor.upper(m) {
                    failures.push(format!("k=2 m={m} p={p} d={d}"));
                }
            }
        }
    }
    Ok(CheckOutcome::new("schwinger-dyson", failures, cases))
}

fn rainbow() -> Result<CheckOutcome> {
    let mut failures = vec![];
    let x = 0.25;
    let z0 = critical_z(x);
    let mut prev = 0.0;
    let mut last = 0.0;
    for s in RainbowIter::new(x, z0)?.take(10_001) {
        if s.g_s < prev {
            failures.push(format!("decrease at a={}", s.a));
            break;
        }
        prev = s.g_s;
        last = s.g_s;
    }
    if (last - 1.5).abs() > 5e-3 {
        failures.push(format!("G_s after 1e4 steps = {last}"));
    }
    let target = rainbow_closed_form(x, 2.0 * z0)?;
    if !RainbowIter::new(x, 2.0 * z0)?.take(201).any(|s| (s.g_s - target).abs() <= 1e-9) {
        failures.push("no convergence within 200 steps at 2 z0".into());
    }
    let grid = [(0.25, z0), (0.25, 2.0 * z0), (1.0, 5.0), (4.0, 10.0), (9.0, 20.0)];
    for (x, z) in grid {
        let diff = (rainbow_closed_form(x, z)? - narayana_gf(x, 1.0 / z)).abs();
        if diff > 1e-12 {
            failures.push(format!("closed form vs F at x={x} z={z}: {diff:e}"));
        }
    }
    Ok(CheckOutcome::new("rainbow-gf", failures, 3 + grid.len()))
}

fn mp_law() -> Result<CheckOutcome> {
    let mut failures = vec![];
    let mut cases = 0;
    for x in [0.25, 1.0, 4.0] {
        let law = MpLaw::new(x)?;
        let mass = law.total_mass()?;
        cases += 1;
        if (mass - 1.0).abs() > 1e-8 {
            failures.push(format!("mass at x={x}: {mass}"));
        }
        for m in 1..=6u32 {
            let got = law.moment(m)?;
            let beta = beta_eval_f64(m as u64, x);
            cases += 1;
            if (got - beta).abs() > 1e-6 {
                failures.push(format!("moment m={m} x={x}: {got} vs {beta}"));
            }
        }
    }
    Ok(CheckOutcome::new("mp-law", failures, cases))
}

/// Taylor partial sum of `e^t`; a lower bound for `t ≥ 0`.
fn exp_lower(t: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for j in 1..40u64 {
        term = term * t / ratio(j);
        sum += &term;
    }
    sum
}

fn variant_ensembles() -> Result<CheckOutcome> {
    let engine = MomentEngine::new();
    let mut failures = vec![];
    let mut cases = 0;
    for d in [2u64, 3] {
        for m in 1..=4 {
            let rep = engine.repeated_moment(&MomentQuery::repeated(4, d, 2, m))?;
            let ind = engine.ensemble_moment(&MomentQuery::normalized(4, d, 2, m))?.total;
            cases += 1;
            if rep > ind {
                failures.push(format!("repeated above independent at d={d} m={m}: {rep} > {ind}"));
            }
        }
    }
    let d_b = 2u64;
    for d_a in [4u64, 6] {
        for k in 1..=2u32 {
            for m in 1..=4usize {
                for p in 1..=4u64 {
                    let lhs = engine.ensemble_moment(&MomentQuery::partial_trace(p, d_a, d_b, k, m))?.total;
                    let base = engine.ensemble_moment(&MomentQuery::normalized(p, d_a / d_b, k, m))?.total;
                    let t = BigRational::new(BigInt::from(m * (m + 1)) * k * d_b, BigInt::from(2 * d_a));
                    let shrink = BigRational::new(1.into(), BigInt::from(d_b).pow(k * (m as u32 - 1)));
                    cases += 1;
                    if lhs > base * exp_lower(&t) * shrink {
                        failures.push(format!("partial trace d_a={d_a} k={k} m={m} p={p}"));
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::new("variant-ensembles", failures, cases))
}

/// Every exact self-check, in a fixed order.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        moment_table()?,
        gaussian_sandwich()?,
        trace_bounds()?,
        class_sums()?,
        bijection()?,
        schwinger_dyson()?,
        rainbow()?,
        mp_law()?,
        variant_ensembles()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrected_table_matches_engine() {
        let rows = paper_check(ReferenceTable::Corrected, 6).unwrap();
        assert!(rows.iter().all(|r| r.mismatches == 0 && r.cases == 54));
    }

    #[test]
    fn literature_table_exact_through_four() {
        let rows = paper_check(ReferenceTable::Literature, 6).unwrap();
        assert!(rows[..4].iter().all(|r| r.mismatches == 0));
        assert!(rows[4].mismatches > 0 && rows[5].mismatches > 0);
    }

    #[test]
    fn max_m_is_bounded() {
        assert!(paper_check(ReferenceTable::Corrected, 7).is_err());
        assert!(paper_check(ReferenceTable::Corrected, 0).is_err());
    }
}
