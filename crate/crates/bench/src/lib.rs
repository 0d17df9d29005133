//! Criterion benchmarks for the quadrature, the possibilistic indicators,
//! the optimum solver and full three-model comparisons.

use criterion::Criterion;
use fuzzy_saving::{
    build_report, possibilistic_expected_utility, solve_optimum, ComparisonSetup, FuzzyNumber,
    QuadratureRule, RandomReturn, Risk, SavingProblem, SolverSettings, Tolerances,
    UtilityFunction, WeightingFunction,
};
use std::hint::black_box;

fn interval_setup(gamma: f64) -> ComparisonSetup {
    ComparisonSetup {
        income: 1.0,
        utility: UtilityFunction::isoelastic(gamma).unwrap(),
        gross_return: 1.1,
        random_return: RandomReturn::uniform(1.0, 1.2).unwrap(),
        weighting: WeightingFunction::linear(),
        fuzzy_return: FuzzyNumber::crisp_interval(1.0, 1.2).unwrap(),
        quadrature: QuadratureRule::standard().clone(),
        solver: SolverSettings::default(),
        tolerances: Tolerances::default(),
    }
}

pub fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_legendre");
    for n in [16usize, 64, 128] {
        group.bench_function(format!("nodes_{n}"), |b| {
            b.iter(|| QuadratureRule::gauss_legendre(black_box(n)).unwrap())
        });
    }
    group.finish();
}

pub fn indicators(c: &mut Criterion) {
    let f = WeightingFunction::linear();
    let a = FuzzyNumber::triangular(1.1, 0.1, 0.08).unwrap();
    let u = UtilityFunction::crra(2.0).unwrap();
    let q = QuadratureRule::standard();
    c.bench_function("expected_utility_triangular_crra", |b| {
        b.iter(|| possibilistic_expected_utility(&f, black_box(&a), &u, q).unwrap())
    });
}

pub fn solves(c: &mut Criterion) {
    let u = UtilityFunction::crra(3.0).unwrap();
    let settings = SolverSettings::default();
    let problems = [
        ("certain", Risk::Certain { gross_return: 1.1 }),
        ("probabilistic", Risk::Probabilistic(RandomReturn::uniform(1.0, 1.2).unwrap())),
        (
            "possibilistic",
            Risk::Possibilistic {
                weighting: WeightingFunction::linear(),
                fuzzy: FuzzyNumber::triangular(1.1, 0.1, 0.1).unwrap(),
            },
        ),
    ];
    let mut group = c.benchmark_group("solve_optimum");
    for (name, risk) in problems {
        let p = SavingProblem::new(1.0, u, risk).unwrap();
        group.bench_function(name, |b| b.iter(|| solve_optimum(black_box(&p), &settings).unwrap()));
    }
    group.finish();
}

pub fn reports(c: &mut Criterion) {
    let setup = interval_setup(3.0);
    c.bench_function("build_report_interval_vs_uniform", |b| {
        b.iter(|| build_report(black_box(&setup)).unwrap())
    });
}

pub fn benchmarks(c: &mut Criterion) {
    quadrature(c);
    indicators(c);
    solves(c);
    reports(c);
}
