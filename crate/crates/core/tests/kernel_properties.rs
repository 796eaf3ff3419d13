mod common;

use imex_bdf2::harness::kernel_report;
use imex_bdf2::kernels::{dcc_bound_check, dcc_bound_constant, KernelTables};
use imex_bdf2::{r_max, TimeMesh};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn uniform_report_is_clean() {
    let rep = kernel_report(&TimeMesh::uniform(1.0, 64).unwrap(), 20, 200, 1);
    assert!(rep.passes());
    assert!(rep.orthogonality <= 1e-12 && rep.completeness <= 1e-12 && rep.dcc_telescoping <= 1e-12);
}

#[test]
fn graded_dcc_bound_has_positive_slack() {
    let mesh = TimeMesh::graded(1.0, 512, 4.0).unwrap();
    let rep = kernel_report(&mesh, 5, 20, 2);
    let bound = rep.dcc_bound.expect("mesh satisfies the ratio condition");
    assert!(bound.min_slack > 0.0 && bound.violations == 0);
}

#[test]
fn single_level_table() {
    let mesh = TimeMesh::from_points(vec![0.0, 0.25]).unwrap();
    let t = KernelTables::new(&mesh);
    assert_eq!(t.dcc.get(1, 0), 0.25);
    assert_eq!(t.doc.get(1, 0), 0.25);
}

#[test]
fn uniform_dcc_second_lag_bound() {
    // r_k = 1, so delta = r_max - 1 and the bound is c_r / delta * tau
    for n in [4, 32, 256] {
        let mesh = TimeMesh::uniform(1.0, n).unwrap();
        let t = KernelTables::new(&mesh);
        let tau = 1.0 / n as f64;
        let limit = dcc_bound_constant() / (r_max() - 1.0) * tau;
        for k in 2..=n {
            assert!(t.dcc.get(k, k - 2) <= limit);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold_on_random_meshes(seed in any::<u64>(), n in 1usize..160) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = common::random_a1_mesh(&mut rng, n, 1.0);
        let rep = kernel_report(&mesh, 4, 20, seed);
        prop_assert!(rep.identities_pass(), "{rep:?}");
        prop_assert_eq!(rep.quadratic_violations, 0);
        if n >= 2 {
            prop_assert!(dcc_bound_check(&mesh, &KernelTables::new(&mesh).dcc).unwrap().holds());
        }
    }
}
