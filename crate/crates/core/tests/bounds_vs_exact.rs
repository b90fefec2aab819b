use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use randtensor::bounds::{sd_bounds_k1, sd_upper_tensor, trace_theorem_bounds};
use randtensor::moments::gaussian_sandwich_floor;
use randtensor::{MomentEngine, MomentQuery};

fn e_norm(engine: &MomentEngine, p: u64, d: u64, k: u32, m: usize) -> BigRational {
    engine.ensemble_moment(&MomentQuery::normalized(p, d, k, m)).unwrap().normalized
}

#[test]
fn schwinger_dyson_sandwich() {
    let engine = MomentEngine::new();
    for p in 2..=6u64 {
        for d in [2u64, 3, 4] {
            let k1 = sd_bounds_k1(p, d, 6).unwrap();
            let tensor = sd_upper_tensor(p, d, 2, 6).unwrap();
            for m in 1..=6 {
                let e = e_norm(&engine, p, d, 1, m);
                assert!(k1.lower(m) <= &e, "lower p={p} d={d} m={m}");
                assert!(&e <= k1.upper(m), "upper p={p} d={d} m={m}");
                let e2 = e_norm(&engine, p, d, 2, m);
                assert!(&e2 <= tensor.upper(m), "tensor p={p} d={d} m={m}");
            }
        }
    }
}

#[test]
fn theorem_bounds_contain_exact() {
    let engine = MomentEngine::new();
    for m in 1..=6 {
        for p in 1..=6u64 {
            for d in [2u64, 3, 4] {
                for k in 1..=3u32 {
                    let b = trace_theorem_bounds(p, d, k, m).unwrap();
                    assert!(b.contains(&e_norm(&engine, p, d, k, m), 1e-10), "m={m} p={p} d={d} k={k}");
                }
            }
        }
    }
    // A point where the lower bound is active: p = 100, d = 10, m = 2.
    let b = trace_theorem_bounds(100, 10, 1, 2).unwrap();
    let e = e_norm(&engine, 100, 10, 1, 2);
    assert!(b.lower > 0.0 && b.contains(&e, 0.0));
}

#[test]
fn gaussian_sandwich_exact() {
    let engine = MomentEngine::new();
    for m in 1..=6 {
        for p in 1..=6u64 {
            for d in [2u64, 3, 4] {
                for k in 1..=3u32 {
                    let e = engine.ensemble_moment(&MomentQuery::normalized(p, d, k, m)).unwrap().total;
                    let g = engine.ensemble_moment(&MomentQuery::gaussian(p, d, k, m)).unwrap().total;
                    assert!(gaussian_sandwich_floor(m, d, k) * &g <= e && e <= g, "m={m} p={p} d={d} k={k}");
                }
            }
        }
    }
}

/// Taylor partial sum of `e^t`, a rational lower bound for `t ≥ 0`.
fn exp_lower(t: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for j in 1..40u32 {
        term = term * t / BigRational::from_integer(j.into());
        sum += &term;
    }
    sum
}

#[test]
fn partial_trace_bound() {
    let engine = MomentEngine::new();
    let d_b = 2u64;
    for d_a in [4u64, 6] {
        for k in 1..=2u32 {
            for m in 1..=4usize {
                for p in 1..=4u64 {
                    let lhs = engine.ensemble_moment(&MomentQuery::partial_trace(p, d_a, d_b, k, m)).unwrap().total;
                    let base = engine.ensemble_moment(&MomentQuery::normalized(p, d_a / d_b, k, m)).unwrap().total;
                    let t = BigRational::new(BigInt::from(m * (m + 1)) * k * d_b, BigInt::from(2 * d_a));
                    let shrink = BigRational::new(1.into(), BigInt::from(d_b).pow(k * (m as u32 - 1)));
                    let rhs = base * exp_lower(&t) * shrink;
                    assert!(lhs <= rhs, "d_a={d_a} k={k} m={m} p={p}: {} > {}", lhs.to_f64().unwrap(), rhs.to_f64().unwrap());
                }
            }
        }
    }
}

/// Sharing factors between terms can only increase the moments.
#[test]
fn repeated_dominates_independent() {
    let engine = MomentEngine::new();
    for d in [2u64, 3] {
        for m in 1..=4 {
            let rep = engine.repeated_moment(&MomentQuery::repeated(4, d, 2, m)).unwrap();
            let ind = engine.ensemble_moment(&MomentQuery::normalized(4, d, 2, m)).unwrap().total;
            assert!(rep >= ind, "d={d} m={m}");
        }
    }
}
