//! Checks of the quadrature-based indicators against independent oracles:
//! composite Simpson integration of the level-set integrals, closed forms,
//! and seeded Monte Carlo for expectations under random returns.

use fuzzy_saving::{
    approx_expected_utility, possibilistic_expected_utility, possibilistic_mean,
    possibilistic_variance, FuzzyNumber, MarginalReturn, Polynomial, QuadratureRule,
    RandomReturn, RealFunction, UtilityFunction, WeightingFunction,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Composite Simpson on `[0, 1]` with `n` (even) panels.
fn simpson(n: usize, g: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / n as f64;
    let mut acc = g(0.0) + g(1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(i as f64 * h);
    }
    acc * h / 3.0
}

/// `½∫[u(a₁)+u(a₂)]f` by Simpson, independent of the crate's quadrature.
fn oracle_expected_utility(f: &WeightingFunction, a: &FuzzyNumber, u: impl Fn(f64) -> f64) -> f64 {
    simpson(20_000, |t| {
        let (lo, hi) = a.level_set(t).unwrap();
        0.5 * (u(lo) + u(hi)) * f.density(t)
    })
}

fn q() -> &'static QuadratureRule {
    QuadratureRule::standard()
}

#[test]
fn triangular_mean_closed_form() {
    // E_f(A) = a + (β - α)/6 under f(t) = 2t
    let f = WeightingFunction::linear();
    let a = FuzzyNumber::triangular(1.0, 0.06, 0.12).unwrap();
    let oracle = oracle_expected_utility(&f, &a, |x| x);
    assert!((oracle - 1.01).abs() < 1e-12);
    assert!((possibilistic_mean(&f, &a, q()).unwrap() - 1.01).abs() < 1e-12);
}

#[test]
fn symmetric_triangular_variance_closed_form() {
    // Var_f(A) = α²/6 under f(t) = 2t
    let f = WeightingFunction::linear();
    for alpha in [0.05, 0.3, 1.0] {
        let a = FuzzyNumber::triangular(3.0, alpha, alpha).unwrap();
        let oracle = oracle_expected_utility(&f, &a, |x| (x - 3.0) * (x - 3.0));
        assert!((oracle - alpha * alpha / 6.0).abs() < 1e-12);
        let got = possibilistic_variance(&f, &a, q()).unwrap();
        assert!((got - alpha * alpha / 6.0).abs() < 1e-12);
    }
}

#[test]
fn nonlinear_utilities_match_simpson() {
    let shapes = [
        FuzzyNumber::triangular(1.1, 0.2, 0.05).unwrap(),
        FuzzyNumber::trapezoidal(0.9, 1.2, 0.3, 0.4).unwrap(),
    ];
    let weights = [
        WeightingFunction::Uniform,
        WeightingFunction::linear(),
        WeightingFunction::power(3.0).unwrap(),
    ];
    let utilities = [
        UtilityFunction::crra(2.0).unwrap(),
        UtilityFunction::crra(0.5).unwrap(),
        UtilityFunction::Log,
        UtilityFunction::cara(1.5).unwrap(),
    ];
    for a in &shapes {
        for f in &weights {
            for u in &utilities {
                let got = possibilistic_expected_utility(f, a, u, q()).unwrap();
                let want = oracle_expected_utility(f, a, |x| u.eval(x, 0).unwrap());
                assert!((got - want).abs() < 1e-11, "{a:?} {f:?} {u:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn crisp_interval_is_weighting_independent() {
    let a = FuzzyNumber::crisp_interval(0.8, 1.7).unwrap();
    let u = UtilityFunction::crra(3.0).unwrap();
    let want = 0.5 * (u.eval(0.8, 0).unwrap() + u.eval(1.7, 0).unwrap());
    for p in [0.0, 0.5, 1.0, 2.0, 7.0] {
        let f = WeightingFunction::power(p).unwrap();
        let got = possibilistic_expected_utility(&f, &a, &u, q()).unwrap();
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn quadrature_stability_64_vs_128() {
    let q64 = QuadratureRule::gauss_legendre(64).unwrap();
    let q128 = QuadratureRule::gauss_legendre(128).unwrap();
    let shapes = [
        FuzzyNumber::crisp_point(1.1).unwrap(),
        FuzzyNumber::crisp_interval(1.0, 1.2).unwrap(),
        FuzzyNumber::triangular(1.1, 0.2, 0.05).unwrap(),
        FuzzyNumber::trapezoidal(0.9, 1.2, 0.3, 0.4).unwrap(),
    ];
    let u = UtilityFunction::crra(2.0).unwrap();
    for f in [WeightingFunction::Uniform, WeightingFunction::linear(), WeightingFunction::power(4.0).unwrap()] {
        for a in &shapes {
            let e64 = possibilistic_expected_utility(&f, a, &u, &q64).unwrap();
            let e128 = possibilistic_expected_utility(&f, a, &u, &q128).unwrap();
            assert!((e64 - e128).abs() < 1e-10);
            let v64 = possibilistic_variance(&f, a, &q64).unwrap();
            let v128 = possibilistic_variance(&f, a, &q128).unwrap();
            assert!((v64 - v128).abs() < 1e-10);
        }
    }
}

#[test]
fn approximation_error_shrinks_fourfold_when_spread_halves() {
    let f = WeightingFunction::linear();
    let u = UtilityFunction::crra(2.0).unwrap();
    let err = |sigma: f64| {
        let a = FuzzyNumber::triangular(1.1, sigma, sigma).unwrap();
        let exact = possibilistic_expected_utility(&f, &a, &u, q()).unwrap();
        let approx = approx_expected_utility(&f, &a, &u, q()).unwrap();
        (exact - approx).abs()
    };
    let spreads = [0.4, 0.2, 0.1, 0.05, 0.025];
    let errors: Vec<f64> = spreads.iter().map(|&s| err(s)).collect();
    for pair in errors.windows(2) {
        assert!(pair[0] >= 4.0 * pair[1], "{errors:?}");
    }
}

#[test]
fn uniform_expectation_matches_monte_carlo() {
    let x = RandomReturn::uniform(1.0, 1.2).unwrap();
    let g = MarginalReturn::new(UtilityFunction::crra(2.0).unwrap(), 0.5);
    let exact = x.expect(&g).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1_000_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let v = g.value(rng.gen_range(1.0..1.2)).unwrap();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let se = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((exact - mean).abs() < 3.0 * se, "{exact} vs {mean} ± {se}");
}

#[test]
fn uniform_second_moment() {
    let x = RandomReturn::uniform(1.0, 1.2).unwrap();
    let got = x.expect(&|v: f64| v * v).unwrap();
    assert!((got - (x.variance() + x.mean() * x.mean())).abs() < 1e-12);
    assert!((got - 1.213_333_333_333_333_3).abs() < 1e-12);
}

fn utility_strategy() -> impl Strategy<Value = UtilityFunction> {
    prop_oneof![
        (0.2f64..6.0).prop_filter("not log", |g| *g != 1.0).prop_map(|g| UtilityFunction::crra(g).unwrap()),
        Just(UtilityFunction::Log),
        (0.1f64..3.0).prop_map(|a| UtilityFunction::cara(a).unwrap()),
        (0.01f64..0.2).prop_map(|b| UtilityFunction::quadratic(b).unwrap()),
    ]
}

fn fuzzy_strategy() -> impl Strategy<Value = FuzzyNumber> {
    prop_oneof![
        (0.8f64..1.5, 0.0f64..0.3, 0.0f64..0.3).prop_map(|(p, l, r)| FuzzyNumber::triangular(p, l, r).unwrap()),
        (0.8f64..1.5, 0.0f64..0.2, 0.0f64..0.3, 0.0f64..0.3)
            .prop_map(|(lo, w, l, r)| FuzzyNumber::trapezoidal(lo, lo + w, l, r).unwrap()),
        (0.6f64..1.5, 0.01f64..0.5).prop_map(|(c, w)| FuzzyNumber::crisp_interval(c, c + w).unwrap()),
    ]
}

fn weighting_strategy() -> impl Strategy<Value = WeightingFunction> {
    prop_oneof![
        Just(WeightingFunction::Uniform),
        (0u32..5).prop_map(|p| WeightingFunction::power(p as f64).unwrap()),
    ]
}

proptest! {
    #[test]
    fn expected_utility_is_linear_in_utility(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        g in utility_strategy(),
        h in utility_strategy(),
        fuzzy in fuzzy_strategy(),
        f in weighting_strategy(),
    ) {
        let combo = |x: f64| a * g.eval(x, 0).unwrap() + b * h.eval(x, 0).unwrap();
        let lhs = possibilistic_expected_utility(&f, &fuzzy, &combo, q()).unwrap();
        let eg = possibilistic_expected_utility(&f, &fuzzy, &g, q()).unwrap();
        let eh = possibilistic_expected_utility(&f, &fuzzy, &h, q()).unwrap();
        prop_assert!((lhs - a * eg - b * eh).abs() < 1e-9);
    }

    #[test]
    fn mean_is_shift_covariant(fuzzy in fuzzy_strategy(), f in weighting_strategy(), t in -0.5f64..2.0) {
        let m = possibilistic_mean(&f, &fuzzy, q()).unwrap();
        let shifted = fuzzy.shifted(t).unwrap();
        let ms = possibilistic_mean(&f, &shifted, q()).unwrap();
        prop_assert!((ms - m - t).abs() < 1e-10);
        let v = possibilistic_variance(&f, &fuzzy, q()).unwrap();
        let vs = possibilistic_variance(&f, &shifted, q()).unwrap();
        prop_assert!((vs - v).abs() < 1e-10);
    }

    #[test]
    fn variance_is_nonnegative(fuzzy in fuzzy_strategy(), f in weighting_strategy()) {
        prop_assert!(possibilistic_variance(&f, &fuzzy, q()).unwrap() >= 0.0);
    }

    #[test]
    fn level_sets_are_nested(fuzzy in fuzzy_strategy(), t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let (a1, a2) = fuzzy.level_set(lo).unwrap();
        let (b1, b2) = fuzzy.level_set(hi).unwrap();
        prop_assert!(a1 <= b1 && b1 <= b2 && b2 <= a2);
    }

    #[test]
    fn random_expectation_is_linear(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        c in 0.5f64..1.5,
        w in 0.01f64..0.5,
        g in utility_strategy(),
        h in utility_strategy(),
    ) {
        let x = RandomReturn::uniform(c, c + w).unwrap();
        let combo = |v: f64| a * g.eval(v, 0).unwrap() + b * h.eval(v, 0).unwrap();
        let lhs = x.expect(&combo).unwrap();
        let rhs = a * x.expect(&g).unwrap() + b * x.expect(&h).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn quadratic_approximations_are_exact(
        c0 in -3.0f64..3.0,
        c1 in -3.0f64..3.0,
        c2 in -3.0f64..3.0,
        fuzzy in fuzzy_strategy(),
        f in weighting_strategy(),
    ) {
        let p = Polynomial::new(vec![c0, c1, c2]);
        let exact = possibilistic_expected_utility(&f, &fuzzy, &p, q()).unwrap();
        let approx = approx_expected_utility(&f, &fuzzy, &p, q()).unwrap();
        prop_assert!((exact - approx).abs() < 1e-10);

        let (lo, hi) = fuzzy.support();
        let x = RandomReturn::uniform(lo, hi.max(lo + 0.01)).unwrap();
        prop_assert!((x.expect(&p).unwrap() - x.approx_expect(&p).unwrap()).abs() < 1e-10);
    }
}
