mod common;

use std::f64::consts::PI;

use common::Shape;
use nicefn::oracle::{self, QuadratureSpec};
use nicefn::{fourier_transform, Complex64};

fn real(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

const WORKED: [(&str, &[f64]); 7] = [
    ("exp(-pi*[[1]][x,x])", &[0.0]),
    ("exp(-pi*[[1]][x,x])", &[1.0]),
    ("x1*exp(-pi*[[1]][x,x])", &[0.5]),
    ("exp(-pi*[[4,0],[0,1]][x,x])", &[0.3, -0.7]),
    ("exp(-pi*[[1]][x,x] + [1].x)", &[0.4]),
    ("exp(-pi*[[1]][x,x] - 2*pi*[0.5].x)", &[-0.2]),
    (
        "exp(-pi*[[2,0.5],[0.5,1]][x,x] + [0.3,-0.2].x)",
        &[0.1, 0.6],
    ),
];

fn doubled(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec::new(spec.dim, spec.half_width, 2 * spec.points_per_axis).unwrap()
}

#[test]
fn doubling_points_changes_little_on_worked_examples() {
    for (text, xi) in WORKED {
        let f = nicefn::expr::parse_function(text).unwrap();
        let spec = QuadratureSpec::default_for(&f).unwrap();
        let xi = real(xi);
        let a = oracle::quad_fourier(&f, &xi, &spec).unwrap();
        let b = oracle::quad_fourier(&f, &xi, &doubled(&spec)).unwrap();
        assert!((a - b).norm() < 1e-9, "{text}: {a} vs {b}");
    }
}

#[test]
fn default_rule_meets_error_target_on_random_functions() {
    let mut rng = common::rng(21);
    for dim in 1..=2 {
        for _ in 0..4 {
            let f = common::function(&mut rng, &Shape::new(dim).shift_radius(1.0));
            let spec = QuadratureSpec::default_for(&f).unwrap();
            let xi = real(&common::real_point(&mut rng, dim, 1.0));
            let a = oracle::quad_fourier(&f, &xi, &spec).unwrap();
            let b = oracle::quad_fourier(&f, &xi, &doubled(&spec)).unwrap();
            let exact = fourier_transform(&f).evaluate(&xi).unwrap();
            assert!((a - exact).norm() < 1e-7, "{a} vs {exact}");
            assert!((b - exact).norm() <= (a - exact).norm() + 1e-12);
        }
    }
}

#[test]
fn quadrature_is_linear() {
    let mut rng = common::rng(22);
    for dim in 1..=3 {
        let shape = Shape::new(dim).terms(2).degree(2).shift_radius(1.0);
        let f = common::function(&mut rng, &shape);
        let g = common::function(&mut rng, &shape);
        let spec = QuadratureSpec::new(dim, 8.0, QuadratureSpec::default_points(dim)).unwrap();
        let xi = real(&common::real_point(&mut rng, dim, 1.0));
        let sum = oracle::quad_fourier(&f.add(&g).unwrap(), &xi, &spec).unwrap();
        let parts = oracle::quad_fourier(&f, &xi, &spec).unwrap()
            + oracle::quad_fourier(&g, &xi, &spec).unwrap();
        assert!((sum - parts).norm() <= 1e-10);
    }
}

#[test]
fn worked_examples_agree_with_closed_forms() {
    for (text, xi) in WORKED {
        let f = nicefn::expr::parse_function(text).unwrap();
        let xi = real(xi);
        let spec = QuadratureSpec::default_for(&f).unwrap();
        let numeric = oracle::quad_fourier(&f, &xi, &spec).unwrap();
        let symbolic = fourier_transform(&f).evaluate(&xi).unwrap();
        assert!(
            (numeric - symbolic).norm() <= 1e-6,
            "{text}: {symbolic} vs {numeric}"
        );
    }
}

#[test]
fn complex_frequency_with_strong_growth_is_refused() {
    let f = nicefn::NiceFunction::standard_gaussian(1);
    let spec = QuadratureSpec::new(1, 1.0, 200).unwrap();
    let err = oracle::quad_fourier(&f, &[Complex64::new(0.0, 0.0)], &spec).unwrap_err();
    assert_eq!(err.code(), "E_SPEC");
    let derivative = oracle::finite_difference(&f, 0, &[1.0], 1e-5).unwrap();
    assert!((derivative.re + 2.0 * PI * (-PI).exp()).abs() <= 1e-6);
}
