mod common;

use proptest::prelude::*;
use qdiscord::qlinalg::{herm_eig, psd_sqrt};
use qdiscord::states::werner;
use qdiscord::{ComplexMatrix, Subsystem, C64};

use common::{det, oracle_eigenvalues, random_hermitian, random_matrix, rng};

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut r = rng(7);
    for dim in [2, 4] {
        for _ in 0..200 {
            let h = random_hermitian(&mut r, dim);
            let want = oracle_eigenvalues(&h);
            let got = herm_eig(&h).unwrap();
            for (a, b) in got.eigenvalues().iter().zip(&want) {
                assert!((a - b).abs() < 1e-9, "{:?} vs {want:?}", got.eigenvalues());
            }
        }
    }
}

#[test]
fn decomposition_reconstructs_and_is_orthonormal() {
    let mut r = rng(11);
    for dim in [2, 4] {
        for _ in 0..300 {
            let h = random_hermitian(&mut r, dim);
            let e = herm_eig(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-12);
            let v = *e.eigenvectors();
            assert!((v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-12);
            assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn trace_and_determinant_from_spectrum() {
    let mut r = rng(13);
    for _ in 0..200 {
        let h = random_hermitian(&mut r, 4);
        let e = herm_eig(&h).unwrap();
        let sum: f64 = e.eigenvalues().iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-10);
        let prod: f64 = e.eigenvalues().iter().product();
        let d = det(&h).re;
        assert!((prod - d).abs() <= 1e-8 * d.abs().max(1.0), "{prod} vs {d}");
    }
}

#[test]
fn degenerate_spectra() {
    // Werner spectra are triply degenerate.
    let rho = werner(0.5).unwrap();
    let e = herm_eig(rho.matrix()).unwrap();
    let want = [0.125, 0.125, 0.125, 0.625];
    for (a, b) in e.eigenvalues().iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(e.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
}

#[test]
fn sqrt_round_trip() {
    let rho = werner(0.5).unwrap();
    let root = psd_sqrt(rho.matrix()).unwrap();
    assert!((root * root).max_abs_diff(rho.matrix()) < 1e-10);
    assert!(root.is_hermitian(1e-12));
    assert!(herm_eig(&root).unwrap().eigenvalues()[0] >= 0.0);

    let mut r = rng(17);
    for _ in 0..100 {
        let g = random_matrix(&mut r, 4);
        let psd = (g * g.adjoint()).hermitian_part();
        let root = psd_sqrt(&psd).unwrap();
        assert!((root * root).max_abs_diff(&psd) < 1e-10);
    }
}

fn c64() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn mat2() -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(c64(), 4).prop_map(|v| ComplexMatrix::from_row_major(2, &v).unwrap())
}

proptest! {
    #[test]
    fn tensor_is_bilinear(alpha in c64(), a in mat2(), b in mat2(), a2 in mat2()) {
        let lhs = ComplexMatrix::tensor(&a.scale(alpha), &b).unwrap();
        let rhs = ComplexMatrix::tensor(&a, &b).unwrap().scale(alpha);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let lhs = ComplexMatrix::tensor(&(a + a2), &b).unwrap();
        let rhs = ComplexMatrix::tensor(&a, &b).unwrap() + ComplexMatrix::tensor(&a2, &b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_of_tensor(a in mat2(), b in mat2()) {
        let ab = ComplexMatrix::tensor(&a, &b).unwrap();
        let keep_a = ab.partial_trace(Subsystem::A).unwrap();
        prop_assert!(keep_a.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let keep_b = ab.partial_trace(Subsystem::B).unwrap();
        prop_assert!(keep_b.max_abs_diff(&b.scale(a.trace())) < 1e-12);
        prop_assert!((keep_a.trace() - ab.trace()).norm() < 1e-12);
    }
}
