use std::f64::consts::PI;

use imex_bdf2::spatial::{
    assemble_tridiagonal, gradient, l2_norm, laplacian, thomas_solve, FastIntegral, IntegralKernel, IntegralOperator,
    TridiagonalMatrix,
};
use imex_bdf2::{Error, GridFunction, SpatialGrid};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense(a: &TridiagonalMatrix) -> DMatrix<f64> {
    let n = a.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            a.diag[i]
        } else if j + 1 == i {
            a.lower[i]
        } else if i + 1 == j {
            a.upper[i]
        } else {
            0.0
        }
    })
}

#[test]
fn thomas_matches_dense_lu() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..20 {
        let n = 100;
        let lower: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
        let upper: Vec<f64> = (0..n).map(|i| if i + 1 == n { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
        let diag: Vec<f64> = (0..n).map(|i| lower[i].abs() + upper[i].abs() + rng.random_range(0.1..2.0)).collect();
        let a = TridiagonalMatrix::new(lower, diag, upper).unwrap();
        assert!(a.is_diagonally_dominant());
        let rhs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = thomas_solve(&a, &rhs).unwrap();
        let oracle = dense(&a).lu().solve(&DVector::from_vec(rhs)).unwrap();
        let scale = oracle.amax();
        for (got, want) in x.iter().zip(oracle.iter()) {
            assert!((got - want).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn thomas_small_system() {
    let a = TridiagonalMatrix::constant(3, -1.0, 2.0, -1.0);
    let x = thomas_solve(&a, &[1.0, 0.0, 1.0]).unwrap();
    for v in x {
        assert!((v - 1.0).abs() < 1e-15);
    }
    assert!(matches!(thomas_solve(&a, &[1.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn assembled_rows_match_the_stencil() {
    let grid = SpatialGrid::new(0.0, 2.0, 10).unwrap();
    let (b0, c1, c2, c3) = (3.0, 0.5, -1.2, 0.25);
    let a = assemble_tridiagonal(b0, c1, c2, c3, &grid);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<f64> = (0..=10).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut v = u.clone();
    v[0] = 0.0;
    v[10] = 0.0;
    let lap = laplacian(&grid, &v);
    let grad = gradient(&grid, &v);
    let av = a.mul_vec(&v[1..10]);
    for i in 1..10 {
        let expect = b0 * v[i] - c1 * lap[i] + c2 * grad[i] + c3 * v[i];
        assert!((av[i - 1] - expect).abs() < 1e-12);
    }
}

#[test]
fn difference_operators_are_second_order() {
    let err = |m: usize| {
        let grid = SpatialGrid::new(0.0, PI, m).unwrap();
        let u = GridFunction::from_fn(&grid, f64::sin);
        let (lap, grad) = (laplacian(&grid, &u), gradient(&grid, &u));
        (1..m).fold((0.0f64, 0.0f64), |(a, b), i| {
            let x = grid.node(i);
            (a.max((lap[i] + x.sin()).abs()), b.max((grad[i] - x.cos()).abs()))
        })
    };
    for m in [32, 64, 128] {
        let (l1, g1) = err(m);
        let (l2, g2) = err(2 * m);
        assert!((l1 / l2 - 4.0).abs() < 0.05);
        assert!((g1 / g2 - 4.0).abs() < 0.05);
    }
}

#[test]
fn l2_norm_of_sine() {
    let grid = SpatialGrid::new(0.0, PI, 64).unwrap();
    let u = GridFunction::from_fn(&grid, f64::sin);
    assert!((l2_norm(&grid, &u).powi(2) - PI / 2.0).abs() < 1e-12);
}

#[test]
fn constant_kernel_integrates_sine() {
    let grid = SpatialGrid::new(0.0, PI, 256).unwrap();
    let u = GridFunction::from_fn(&grid, f64::sin);
    let op = IntegralOperator::new(&grid, &IntegralKernel::Constant(1.0), 0.0);
    let out = op.apply_direct(&u).unwrap();
    let fast = FastIntegral::new(&op).unwrap().apply(&u).unwrap();
    for i in 1..256 {
        assert!((out[i] - 2.0).abs() < 3e-5);
        assert!((fast[i] - out[i]).abs() < 1e-13);
    }
}

#[test]
fn time_dependent_kernel_has_no_fast_path() {
    let grid = SpatialGrid::new(0.0, 1.0, 16).unwrap();
    let k = IntegralKernel::time_dependent(|y, t| (1.0 + t) * y);
    let op = IntegralOperator::new(&grid, &k, 0.5);
    assert!(matches!(FastIntegral::new(&op), Err(Error::NonStationaryKernel)));
    let u = GridFunction::from_fn(&grid, |x| x);
    let out = op.apply_direct(&u).unwrap();
    let h = grid.h();
    let oracle: f64 = (0..=16)
        .map(|j| (if j == 0 || j == 16 { 0.5 } else { 1.0 }) * h * 1.5 * (grid.node(j) - grid.node(3)) * grid.node(j))
        .sum();
    assert!((out[3] - oracle).abs() < 1e-14);
}

proptest! {
    #[test]
    fn assembled_matrix_is_diagonally_dominant(b0 in 0.0f64..1e4, c1 in 0.01f64..10.0, c3 in 0.0f64..10.0, m in 2usize..200, frac in 0.0f64..1.0) {
        let grid = SpatialGrid::new(0.0, 1.0, m).unwrap();
        let c2 = frac * 2.0 * c1 / grid.h();
        prop_assume!(c2 * grid.h() / 2.0 <= c1);
        prop_assert!(assemble_tridiagonal(b0, c1, c2, c3, &grid).is_diagonally_dominant());
    }

    #[test]
    fn fast_path_matches_direct(seed in any::<u64>(), m in 2usize..300, width in 0.1f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = SpatialGrid::new(-1.0, 1.0, m).unwrap();
        let k = IntegralKernel::stationary(move |y| (-(y / width).powi(2)).exp() * (1.0 + y));
        let op = IntegralOperator::new(&grid, &k, 0.0);
        let u: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = op.apply_direct(&u).unwrap();
        let b = FastIntegral::new(&op).unwrap().apply(&u).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12 * 3.0 * 2.0);
    }
}
