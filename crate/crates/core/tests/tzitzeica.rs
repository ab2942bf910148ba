use std::sync::Arc;

use sl3_core::tzitzeica::{self, blaschke_metric, constant_solution, residual, Background, Boundary, QField, TzitzeicaProblem};
use sl3_core::Error;

fn flat(q_sq: f64, n: usize, boundary: f64) -> TzitzeicaProblem {
    TzitzeicaProblem::new(Background::FlatLocal, QField::ModulusSq(q_sq), 1.0, n, Boundary::Constant(boundary))
}

#[test]
fn constant_closed_form() {
    // 8c e^{-4u} = e^{2u}/2 gives u = ln(16c)/6
    for c in [0.01, 1.0 / 16.0, 0.5, 3.0] {
        let u0 = (16.0f64 * c).ln() / 6.0;
        assert!((constant_solution(c) - u0).abs() < 1e-15);
        let s = tzitzeica::solve(&flat(c, 33, u0), 1e-12, 30).unwrap();
        let err = s.interior().map(|(_, u)| (u - u0).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "c = {c}: {err}");
    }
}

#[test]
fn start_independence() {
    let p = flat(0.2, 33, 0.1);
    let a = tzitzeica::solve(&p, 1e-11, 40).unwrap();
    let start = vec![0.1; 33 * 33];
    let b = tzitzeica::solve_from(&p, 1e-11, 40, Some(&start)).unwrap();
    let far = vec![-0.8; 33 * 33];
    let c = tzitzeica::solve_from(&p, 1e-11, 60, Some(&far)).unwrap();
    for other in [&b, &c] {
        let d = a.u.iter().zip(&other.u).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(d < 1e-9, "{d}");
    }
}

#[test]
fn monotone_in_cubic_differential() {
    let mut prev: Option<Vec<f64>> = None;
    for c in [0.0, 0.05, 0.2, 1.0] {
        let s = tzitzeica::solve(&flat(c, 33, 0.0), 1e-11, 40).unwrap();
        if let Some(p) = &prev {
            assert!(s.interior().all(|(i, u)| u >= p[i] - 1e-12));
        }
        prev = Some(s.u);
    }
}

#[test]
fn hyperbolic_zero_differential_is_zero() {
    let p = TzitzeicaProblem::new(Background::HyperbolicDisk, QField::ModulusSq(0.0), 0.9, 33, Boundary::Constant(0.0));
    let s = tzitzeica::solve(&p, 1e-12, 30).unwrap();
    assert!(s.interior().all(|(_, u)| u.abs() < 1e-12));
    let metric = blaschke_metric(&s, &p);
    for (i, m) in metric.iter().enumerate() {
        if let Some(m) = m {
            let x = p.coord(i % 33);
            let y = p.coord(i / 33);
            assert!((m - p.lambda(x, y)).abs() < 1e-9 * p.lambda(x, y));
        }
    }
}

#[test]
fn hyperbolic_with_differential_converges() {
    let q = QField::ModulusSqFn(Arc::new(|x: f64, y: f64| 0.05 * (x * x + y * y)));
    let p = TzitzeicaProblem::new(Background::HyperbolicDisk, q, 0.8, 33, Boundary::Constant(0.0));
    let s = tzitzeica::solve(&p, 1e-10, 40).unwrap();
    assert!(s.residual_inf < 1e-10);
    assert!(residual(&s.u, &p).unwrap() < 1e-10);
    assert!(s.interior().all(|(_, u)| u > -1e-12));
}

#[test]
fn polar_boundary_data() {
    let b = Boundary::Polar(Arc::new(|_r: f64, th: f64| 0.1 * th.cos()));
    let p = TzitzeicaProblem::new(Background::FlatLocal, QField::ModulusSq(1.0 / 16.0), 1.0, 33, b);
    let s = tzitzeica::solve(&p, 1e-10, 40).unwrap();
    // u(x, y) and u(x, -y) agree by symmetry of the data
    let n = 33;
    for j in 0..n {
        for i in 0..n {
            assert!((s.u[j * n + i] - s.u[(n - 1 - j) * n + i]).abs() < 1e-9);
        }
    }
}

#[test]
fn invalid_problems() {
    let big = TzitzeicaProblem::new(Background::HyperbolicDisk, QField::ModulusSq(0.0), 0.99, 33, Boundary::Constant(0.0));
    assert!(matches!(tzitzeica::solve(&big, 1e-10, 10), Err(Error::InvalidDomain(_))));
    assert!(tzitzeica::solve(&flat(0.1, 32, 0.0), 1e-10, 10).is_err());
    assert!(tzitzeica::solve(&flat(0.1, 9, 0.0), 1e-10, 10).is_err());
    assert!(tzitzeica::solve(&flat(f64::NAN, 33, 0.0), 1e-10, 10).is_err());
}

#[test]
fn non_convergence_is_reported() {
    let p = flat(0.2, 33, 0.1);
    assert!(matches!(tzitzeica::solve(&p, 1e-14, 1), Err(Error::NonConvergence { .. })));
}
