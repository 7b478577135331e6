use approx::assert_abs_diff_eq;
use contactsim::geometry::{
    contains_point_circle, contains_point_cuboid, contains_point_rect, relative_center, rotation_matrix,
};
use contactsim::Vec3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rotation_is_orthonormal(theta in -10.0f64..10.0) {
        let r = rotation_matrix(theta);
        let err = (r * r.transpose() - nalgebra::Matrix3::identity()).abs().max();
        prop_assert!(err < 1e-12);
        prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        prop_assert_eq!(rotation_matrix(-theta), r.transpose());
    }

    #[test]
    fn relative_center_round_trips(
        ax in -5.0f64..5.0, ay in -5.0f64..5.0, bx in -5.0f64..5.0, by in -5.0f64..5.0, theta in -4.0f64..4.0,
    ) {
        let (ra, rb) = (Vec3::new(ax, ay, 0.0), Vec3::new(bx, by, 0.0));
        let q = relative_center(&ra, theta, &rb);
        // World-from-body written out as the standard counterclockwise rotation.
        let (s, c) = theta.sin_cos();
        let back = Vec3::new(c * q.x - s * q.y, s * q.x + c * q.y, 0.0);
        prop_assert!((back - (rb - ra)).norm() < 1e-12);
    }
}

/// Fraction of uniform samples in `[-h, h]^d` that `inside` accepts.
fn hit_fraction(rng: &mut ChaCha8Rng, h: [f64; 3], dims: usize, inside: impl Fn(&Vec3) -> bool) -> f64 {
    const N: usize = 10_000;
    let hits = (0..N)
        .filter(|_| {
            let mut p = Vec3::zeros();
            for i in 0..dims {
                p[i] = rng.gen_range(-h[i]..h[i]);
            }
            inside(&p)
        })
        .count();
    hits as f64 / N as f64
}

/// Five-sigma binomial band around `expected`.
fn within_sampling_error(measured: f64, expected: f64) {
    let sigma = (expected * (1.0 - expected) / 10_000.0).sqrt();
    assert!((measured - expected).abs() <= 5.0 * sigma + 1e-12, "measured {measured}, expected {expected}");
}

#[test]
fn containment_matches_rejection_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (c1, c2) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));
        let pad = [1.5 * c1, 1.5 * c2, 1.0];
        let f = hit_fraction(&mut rng, pad, 2, |p| contains_point_rect(p, c1, c2));
        within_sampling_error(f, (c1 * c2) / (pad[0] * pad[1]));

        let r = rng.gen_range(0.1..2.0);
        let center = Vec3::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2), 0.0);
        let half = r + 0.2;
        let f = hit_fraction(&mut rng, [half, half, 1.0], 2, |p| contains_point_circle(p, &center, r));
        within_sampling_error(f, std::f64::consts::PI * r * r / (4.0 * half * half));

        let he = [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)];
        let pad = [1.3 * he[0], 1.3 * he[1], 1.3 * he[2]];
        let f = hit_fraction(&mut rng, pad, 3, |p| contains_point_cuboid(p, &he));
        within_sampling_error(f, 1.0 / 1.3f64.powi(3));
    }
}

#[test]
fn boundaries_are_contained() {
    assert!(contains_point_rect(&Vec3::new(1.0, -0.5, 0.0), 1.0, 0.5));
    assert!(contains_point_circle(&Vec3::new(0.0, 2.0, 0.0), &Vec3::new(0.0, 1.0, 0.0), 1.0));
    assert!(contains_point_cuboid(&Vec3::new(1.0, 1.0, 1.0), &[1.0, 1.0, 1.0]));
    assert!(!contains_point_rect(&Vec3::new(1.0 + 1e-12, 0.0, 0.0), 1.0, 0.5));
    assert_abs_diff_eq!(rotation_matrix(0.0)[(0, 1)], 0.0);
}
