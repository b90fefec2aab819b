use num_traits::ToPrimitive;

use randtensor::sim::{empirical_moment, run_trials, EnsembleKind, EnsembleSpec};
use randtensor::{MomentEngine, MomentQuery};

fn within_five_se(kind: EnsembleKind, q: MomentQuery, trials: usize) {
    let engine = MomentEngine::new();
    let exact = match kind {
        EnsembleKind::Repeated => engine.repeated_moment(&q).unwrap() / q.dimension(),
        _ => engine.ensemble_moment(&q).unwrap().normalized,
    };
    let exact = exact.to_f64().unwrap();
    let spec = EnsembleSpec::new(kind, q.p, q.d, q.k, 11).unwrap();
    let samples = run_trials(&spec, trials).unwrap();
    let est = empirical_moment(&samples, q.m as u32).unwrap();
    assert!(
        (est.mean - exact).abs() <= 5.0 * est.std_error,
        "{kind:?}: {} ± {} vs {exact}",
        est.mean,
        est.std_error
    );
}

#[test]
fn gaussian_moments() {
    within_five_se(EnsembleKind::Gaussian, MomentQuery::gaussian(4, 3, 1, 3), 2000);
}

#[test]
fn partial_trace_moments() {
    within_five_se(
        EnsembleKind::PartialTrace { d_a: 3, d_b: 2 },
        MomentQuery::partial_trace(4, 3, 2, 1, 3),
        2000,
    );
}

#[test]
fn repeated_moments() {
    within_five_se(EnsembleKind::Repeated, MomentQuery::repeated(4, 2, 2, 3), 2000);
}
