use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use projkit::linalg::{
    c, hermitian_eigen, op_norm, psd_geq, range_projection, spectral_projection, spectral_projection_tol, CMat,
    FinProjection, HermitianMatrix, Interval, C64,
};
use projkit::ProjError;

fn max_entry(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_from(n: usize, re: &[f64], im: &[f64]) -> HermitianMatrix {
    let m = CMat::from_fn(n, n, |i, j| C64::new(re[i * n + j], im[i * n + j]));
    HermitianMatrix::from_upper(&m)
}

fn hermitian_strategy() -> impl Strategy<Value = HermitianMatrix> {
    (1usize..=8).prop_flat_map(|n| {
        (prop::collection::vec(-2.0f64..2.0, n * n), prop::collection::vec(-2.0f64..2.0, n * n))
            .prop_map(move |(re, im)| hermitian_from(n, &re, &im))
    })
}

fn diag(values: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_real_diag(values)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eigen_reconstructs_and_is_unitary(h in hermitian_strategy()) {
        let e = hermitian_eigen(&h).unwrap();
        let n = h.dim();
        let v = &e.vectors;
        let d = CMat::from_fn(n, n, |i, j| if i == j { c(e.values[i]) } else { c(0.0) });
        let back = v * d * v.adjoint();
        prop_assert!(max_entry(&(back - h.as_mat())) <= 1e-10);
        let gram = v.adjoint() * v;
        prop_assert!(max_entry(&(gram - CMat::identity(n, n))) <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_agree_with_nalgebra(h in hermitian_strategy()) {
        let ours = hermitian_eigen(&h).unwrap().values;
        let m: DMatrix<Complex64> = h.as_mat().clone();
        let mut theirs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().cloned().collect();
        theirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn shift_moves_every_eigenvalue(h in hermitian_strategy(), t in -3.0f64..3.0) {
        let a = hermitian_eigen(&h).unwrap().values;
        let b = hermitian_eigen(&h.shifted(t)).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x + t - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn range_projection_is_idempotent(
        n in 1usize..=7,
        k in 1usize..=4,
        re in prop::collection::vec(-1.0f64..1.0, 28),
        im in prop::collection::vec(-1.0f64..1.0, 28),
    ) {
        let m = CMat::from_fn(n, k, |i, j| C64::new(re[i * 4 + j], im[i * 4 + j]));
        let p = range_projection(&m);
        let pm = p.as_mat();
        prop_assert!(max_entry(&(pm * pm - pm)) <= 1e-10);
        prop_assert!(max_entry(&(pm * &m - &m)) <= 1e-9);
        prop_assert!(p.rank() <= n.min(k));
    }
}

#[test]
fn spectral_projections_of_complementary_intervals_sum_to_one() {
    let h = diag(&[-1.0, 0.25, 0.5, 2.0, 3.0]);
    let cut = 1.0;
    let up = spectral_projection(&h, Interval::at_least(cut)).unwrap();
    let down = spectral_projection(&h, Interval::below(cut)).unwrap();
    let sum = up.as_mat() + down.as_mat();
    assert!(max_entry(&(sum - CMat::identity(5, 5))) <= 1e-12);
    assert_eq!(up.rank(), 2);
    assert_eq!(down.rank(), 3);
}

#[test]
fn spectral_projection_refuses_a_cut_on_an_eigenvalue() {
    let h = diag(&[0.0, 1.0, 2.0]);
    let err = spectral_projection(&h, Interval::at_least(1.0)).unwrap_err();
    assert!(matches!(err, ProjError::AmbiguousCut { .. }));
    let loose = spectral_projection_tol(&h, Interval::at_least(1.0 + 1e-6), 1e-9).unwrap();
    assert_eq!(loose.rank(), 1);
}

#[test]
fn non_hermitian_input_is_rejected() {
    let mut m = CMat::zeros(2, 2);
    m[(0, 1)] = c(1.0);
    assert!(HermitianMatrix::new(m).is_err());
}

#[test]
fn non_idempotent_input_is_not_a_projection() {
    let m = CMat::from_fn(2, 2, |i, j| if i == j { c(0.5) } else { c(0.0) });
    assert!(matches!(FinProjection::new(m), Err(ProjError::NotProjection(_))));
}

#[test]
fn complement_and_basis_are_consistent() {
    let v = projkit::linalg::CVec::from_vec(vec![c(1.0), c(1.0), c(0.0)]);
    let p = FinProjection::line(&v);
    assert_eq!(p.rank(), 1);
    assert_eq!(p.complement().rank(), 2);
    let b = p.basis();
    assert_eq!(b.ncols(), 1);
    let back = &b * b.adjoint();
    assert!(max_entry(&(back - p.as_mat())) <= 1e-12);
}

#[test]
fn operator_norm_of_diagonal_matrix() {
    let h = diag(&[-3.0, 1.0, 2.0]);
    assert!((op_norm(h.as_mat()) - 3.0).abs() <= 1e-12);
    let rect = CMat::from_fn(2, 3, |i, j| if i == 0 && j == 2 { c(4.0) } else { c(0.0) });
    assert!((op_norm(&rect) - 4.0).abs() <= 1e-12);
}

#[test]
fn loewner_order_on_diagonals() {
    let a = diag(&[1.0, 2.0]);
    let b = diag(&[0.5, 2.0]);
    assert!(psd_geq(&a, &b, 1e-12));
    assert!(!psd_geq(&b, &a, 1e-12));
}
