mod common;

use proptest::prelude::*;
use qdiscord::states::{
    bloch_ket, generalized_werner, mix, rho_1234, rho_abc, superposition_basis, werner,
    werner_separable_decomposition, Rho1234, RhoAbc,
};
use qdiscord::{ComplexMatrix, DensityMatrix, Ket, C64};
use rand::Rng;

use common::{gaussian_c64, rng};

fn assert_density(rho: &DensityMatrix) {
    let m = rho.matrix();
    assert!(m.is_hermitian(1e-10));
    assert!((m.trace().re - 1.0).abs() < 1e-10 && m.trace().im.abs() < 1e-10);
    assert!(rho.eigenvalues().unwrap()[0] >= -1e-10);
}

#[test]
fn rotated_basis_is_orthonormal() {
    let mut r = rng(3);
    for _ in 0..100 {
        let n = gaussian_c64(&mut r) * 2.0;
        let plus = Ket::plus_n(n);
        let minus = Ket::minus_n(n);
        assert!(plus.inner(&minus).norm() < 1e-12);
        assert!((plus.inner(&plus).re - 1.0).abs() < 1e-12);
        assert!((minus.inner(&minus).re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn generalized_werner_is_a_local_rotation_of_the_n0_state() {
    let mut r = rng(5);
    for _ in 0..100 {
        let p: f64 = r.random();
        let k: f64 = r.random::<f64>() * 3.0;
        let n = gaussian_c64(&mut r);
        let u = superposition_basis(n);
        assert!((u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        let base = generalized_werner(p, C64::new(0.0, 0.0), k).unwrap();
        let rotated = base.local_unitary(&u, &u).unwrap();
        let direct = generalized_werner(p, n, k).unwrap();
        assert!(rotated.matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }
}

#[test]
fn k_zero_generalized_werner_is_a_product_mixture() {
    // with k = 0 the pure part is |+n>|+n>, so the state is separable
    for &(p, n) in &[(0.3, 0.5), (1.0, 2.0), (0.9, 0.0)] {
        let rho = generalized_werner(p, C64::new(n, 0.0), 0.0).unwrap();
        let pt = rho.matrix().partial_transpose(qdiscord::Subsystem::B).unwrap();
        let min = qdiscord::qlinalg::herm_eig(&pt).unwrap().eigenvalues()[0];
        assert!(min >= -1e-12);
    }
}

#[test]
fn rho2_and_rho3_swap() {
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let two = rho_1234(Rho1234::Two, p).unwrap().swap_qubits().unwrap();
        let three = rho_1234(Rho1234::Three, p).unwrap();
        assert!(two.matrix().max_abs_diff(three.matrix()) < 1e-12);
    }
}

#[test]
fn bloch_kets_are_normalized() {
    let mut r = rng(9);
    for _ in 0..100 {
        let k = bloch_ket(r.random::<f64>() * 10.0 - 5.0, r.random::<f64>() * 10.0 - 5.0);
        assert!((k.inner(&k).re - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructors_yield_density_matrices(p in 0.0..=1.0f64, n_re in -3.0..3.0f64, n_im in -3.0..3.0f64, k in 0.0..4.0f64) {
        assert_density(&rho_abc(RhoAbc::A, p).unwrap());
        assert_density(&rho_abc(RhoAbc::B, p).unwrap());
        assert_density(&rho_abc(RhoAbc::C, p).unwrap());
        for which in [Rho1234::One, Rho1234::Two, Rho1234::Three, Rho1234::Four] {
            assert_density(&rho_1234(which, p).unwrap());
        }
        assert_density(&werner(p).unwrap());
        assert_density(&generalized_werner(p, C64::new(n_re, n_im), k).unwrap());
    }

    #[test]
    fn separable_decomposition_matches_werner(p in 0.0..=(1.0 / 3.0)) {
        let parts = werner_separable_decomposition(p).unwrap();
        let total: f64 = parts.iter().map(|c| c.weight).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(parts.iter().all(|c| c.weight >= 0.0));
        let rho = mix(&parts).unwrap();
        prop_assert!(rho.matrix().max_abs_diff(werner(p).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn out_of_range_parameters_are_rejected(p in 1.0001..10.0f64) {
        prop_assert!(werner(p).is_err());
        prop_assert!(werner(-p).is_err());
        prop_assert!(rho_1234(Rho1234::Two, p).is_err());
        prop_assert!(generalized_werner(0.5, C64::new(0.0, 0.0), -p).is_err());
        prop_assert!(werner_separable_decomposition(p / 3.0 + 0.01).is_err());
    }
}
