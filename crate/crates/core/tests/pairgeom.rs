use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use proptest::prelude::*;

use projkit::linalg::{c, CMat, CVec, FinProjection, C64};
use projkit::pairgeom::{angle, d_a, decompose_pair, decompose_subspaces, pair_norm_distance, TOL_ANGLE_SQ};
use projkit::ProjError;

fn largest_singular_value(m: &CMat) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Orthonormal columns from the QR factor of a random block.
fn orthonormal(n: usize, k: usize, entries: &[(f64, f64)]) -> CMat {
    let m = CMat::from_fn(n, k, |i, j| {
        let (re, im) = entries[(i * k + j) % entries.len()];
        C64::new(re, im)
    });
    let q = m.qr().q();
    q.columns(0, k).into_owned()
}

fn projection_pair() -> impl Strategy<Value = (FinProjection, FinProjection)> {
    (2usize..=7)
        .prop_flat_map(|n| (Just(n), 0..=n, 0..=n, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 49)))
        .prop_flat_map(|(n, a, b, e)| {
            let rot: Vec<(f64, f64)> = e.iter().rev().cloned().collect();
            Just((
                FinProjection::from_orthonormal(&orthonormal(n, a, &e)),
                FinProjection::from_orthonormal(&orthonormal(n, b, &rot)),
            ))
        })
}

fn line(v: &[f64]) -> FinProjection {
    FinProjection::line(&CVec::from_iterator(v.len(), v.iter().map(|&x| c(x))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dimensions_add_up((p, q) in projection_pair()) {
        let d = match decompose_pair(&p, &q) {
            Err(ProjError::NearDegenerate { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        let g = d.generic_angles.len();
        prop_assert_eq!(d.ambient_dim(), p.dim());
        prop_assert_eq!(d.dim_11 + d.dim_10 + g, p.rank());
        prop_assert_eq!(d.dim_11 + d.dim_01 + g, q.rank());
        prop_assert!(d.generic_angles.iter().all(|&t| t > 0.0 && t < FRAC_PI_2));
    }

    #[test]
    fn swapping_the_pair_swaps_the_off_corners((p, q) in projection_pair()) {
        let (Ok(a), Ok(b)) = (decompose_pair(&p, &q), decompose_pair(&q, &p)) else { return Ok(()) };
        prop_assert_eq!(a.dim_11, b.dim_11);
        prop_assert_eq!(a.dim_10, b.dim_01);
        prop_assert_eq!(a.dim_01, b.dim_10);
        prop_assert_eq!(a.dim_00, b.dim_00);
        prop_assert_eq!(a.generic_angles.len(), b.generic_angles.len());
        for (x, y) in a.generic_angles.iter().zip(&b.generic_angles) {
            prop_assert!((x - y).abs() <= 1e-7);
        }
    }

    #[test]
    fn norm_distance_matches_operator_norm((p, q) in projection_pair()) {
        let Ok(ours) = pair_norm_distance(&p, &q) else { return Ok(()) };
        let direct = largest_singular_value(&(p.as_mat() - q.as_mat()));
        prop_assert!((ours - direct).abs() <= 1e-7, "{ours} vs {direct}");
    }

    #[test]
    fn subspace_route_agrees_with_projection_route((p, q) in projection_pair()) {
        let Ok(a) = decompose_pair(&p, &q) else { return Ok(()) };
        let Ok(b) = decompose_subspaces(&p.basis(), &q.basis(), p.dim(), TOL_ANGLE_SQ) else { return Ok(()) };
        prop_assert_eq!((a.dim_11, a.dim_10, a.dim_01, a.dim_00), (b.dim_11, b.dim_10, b.dim_01, b.dim_00));
    }
}

#[test]
fn two_lines_in_the_plane() {
    for &theta in &[0.1, FRAC_PI_4, 1.2] {
        let p = line(&[1.0, 0.0]);
        let q = line(&[theta.cos(), theta.sin()]);
        let d = decompose_pair(&p, &q).unwrap();
        assert_eq!((d.dim_11, d.dim_10, d.dim_01, d.dim_00), (0, 0, 0, 0));
        assert!((d.generic_angles[0] - theta).abs() <= 1e-12);
        assert!((pair_norm_distance(&p, &q).unwrap() - theta.sin()).abs() <= 1e-12);
        assert!((d_a(&p, &q).unwrap() - theta).abs() <= 1e-10);
        assert!((angle(&p, &q).unwrap() - theta).abs() <= 1e-12);
    }
}

#[test]
fn orthogonal_lines_have_distance_one_and_no_generic_part() {
    let p = line(&[1.0, 0.0, 0.0]);
    let q = line(&[0.0, 1.0, 0.0]);
    let d = decompose_pair(&p, &q).unwrap();
    assert_eq!((d.dim_11, d.dim_10, d.dim_01, d.dim_00), (0, 1, 1, 1));
    assert!(d.generic_angles.is_empty());
    assert_eq!(d.norm_distance(), 1.0);
    assert_eq!(d.angle(), FRAC_PI_2);
}

#[test]
fn equal_projections_are_at_distance_zero() {
    let p = line(&[1.0, 2.0, 2.0]);
    let d = decompose_pair(&p, &p).unwrap();
    assert_eq!((d.dim_11, d.dim_10, d.dim_01, d.dim_00), (1, 0, 0, 2));
    assert_eq!(pair_norm_distance(&p, &p).unwrap(), 0.0);
}

#[test]
fn repeated_angles_cluster() {
    let t: f64 = 0.4;
    let b1 = CMat::from_fn(4, 2, |i, j| if i == 2 * j { c(1.0) } else { c(0.0) });
    let b2 = CMat::from_fn(4, 2, |i, j| {
        if i == 2 * j {
            c(t.cos())
        } else if i == 2 * j + 1 {
            c(t.sin())
        } else {
            c(0.0)
        }
    });
    let d = decompose_pair(&FinProjection::from_orthonormal(&b1), &FinProjection::from_orthonormal(&b2)).unwrap();
    let groups = d.distinct_angles(1e-8);
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].1, 2);
    assert!((groups[0].0 - t).abs() <= 1e-12);
}

#[test]
fn mismatched_sizes_are_rejected() {
    let p = FinProjection::identity(2);
    let q = FinProjection::identity(3);
    assert!(matches!(decompose_pair(&p, &q), Err(ProjError::Dimension(_))));
}
