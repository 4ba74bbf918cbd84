use std::f64::consts::PI;

use proptest::prelude::*;

use orliczkit::bodies::random_polygon_seeded;
use orliczkit::orlicz_add::{default_schedule, orlicz_add, orlicz_add_scalar, variational_mixed_volume};
use orliczkit::sphere::planar;
use orliczkit::{Body, Dir, Error, OrliczFn};

fn pow(p: f64) -> OrliczFn {
    OrliczFn::power_law(p, 2).unwrap()
}

fn circle(m: usize) -> Vec<Dir> {
    (0..m).map(|j| planar(2.0 * PI * j as f64 / m as f64)).collect()
}

#[test]
fn linear_sum_is_exact() {
    let k = random_polygon_seeded(1);
    let l = random_polygon_seeded(2);
    let s = orlicz_add(&k, &l, &pow(1.0), &pow(1.0), 0.3, &circle(64)).unwrap();
    for i in 0..64 {
        assert!((s.f[i] - (s.h_k[i] + 0.3 * s.h_l[i])).abs() < 1e-12);
    }
    assert!(s.max_residual <= 1e-12);
}

#[test]
fn balls_under_square_root() {
    let b = Body::ball(2, 1.0).unwrap();
    for eps in [0.5, 0.1, 0.01] {
        let s = orlicz_add(&b, &b, &pow(0.5), &pow(0.5), eps, &circle(16)).unwrap();
        assert!(s.f.iter().all(|f| (f - (1.0 + eps).powi(2)).abs() < 1e-12));
    }
}

#[test]
fn sum_tends_to_k() {
    let k = Body::square(1.0).unwrap();
    let l = Body::ball(2, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let s = orlicz_add(&k, &l, &pow(2.0), &pow(0.5), eps, &circle(128)).unwrap();
        let d = s.f.iter().zip(&s.h_k).map(|(f, h)| (f - h).abs()).fold(0.0, f64::max);
        assert!(d < last);
        last = d;
    }
    assert!(last < 1e-3);
}

#[test]
fn mixed_classes_rejected() {
    let k = Body::square(1.0).unwrap();
    let err = orlicz_add(&k, &k, &pow(1.0), &pow(-1.0), 0.1, &circle(8)).unwrap_err();
    assert_eq!(err, Error::MixedMonotonicity);
}

#[test]
fn variational_examples() {
    let sq = Body::square(1.0).unwrap();
    let disk = Body::ball(2, 1.0).unwrap();
    let s = default_schedule();

    let e = variational_mixed_volume(&disk, &disk, &pow(0.5), &pow(0.5), &s).unwrap();
    assert_eq!(e.polygon_vertices, Some(256));
    assert!((e.extrapolated - PI).abs() / PI < 5e-3);

    let e = variational_mixed_volume(&sq, &disk, &pow(1.0), &pow(1.0), &s).unwrap();
    assert!((e.extrapolated - 4.0).abs() < 1e-6);
    assert!((e.direct - 4.0).abs() < 1e-12);

    let e = variational_mixed_volume(&sq, &disk, &pow(1.0), &pow(2.0), &s).unwrap();
    assert!((e.extrapolated - 4.0).abs() / 4.0 < 5e-3);
    assert!(e.enrichment_drift < 1e-8);

    // decreasing pair uses the right derivative
    let e = variational_mixed_volume(&sq, &disk, &pow(-1.0), &pow(-0.5), &s).unwrap();
    assert_eq!(e.derivative_at_one, -1.0);
    assert!(e.relative_gap < 5e-3, "{}", e.relative_gap);
}

#[test]
fn pointwise_quotients_converge() {
    let k = random_polygon_seeded(3);
    let l = random_polygon_seeded(4);
    let e = variational_mixed_volume(&k, &l, &pow(2.0), &pow(0.5), &default_schedule()).unwrap();
    assert!(e.rows.windows(2).all(|w| w[1].pointwise_error < w[0].pointwise_error));
    assert!(e.rows.iter().all(|r| r.max_residual <= 1e-12));
}

#[test]
fn schedule_and_dimension_checks() {
    let sq = Body::square(1.0).unwrap();
    let ball3 = Body::ball(3, 1.0).unwrap();
    assert!(matches!(
        variational_mixed_volume(&ball3, &ball3, &pow(1.0), &pow(1.0), &default_schedule()),
        Err(Error::UnsupportedDimension(3, _))
    ));
    let bad = variational_mixed_volume(&sq, &sq, &pow(1.0), &pow(1.0), &[0.1, 0.2]);
    assert!(matches!(bad, Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich(seed in 0u64..10_000, eps in 1e-4f64..0.5, p in 0.2f64..4.0, q in 0.2f64..4.0) {
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed + 1);
        let s = orlicz_add(&k, &l, &pow(p), &pow(q), eps, &circle(32)).unwrap();
        for (f, h) in s.f.iter().zip(&s.h_k) {
            prop_assert!(*f >= *h);
        }
        prop_assert!(s.max_residual <= 1e-12);
        let sd = orlicz_add(&k, &l, &pow(-p), &pow(-q), eps, &circle(32)).unwrap();
        for (f, h) in sd.f.iter().zip(&sd.h_k) {
            prop_assert!(*f <= *h);
        }
    }

    #[test]
    fn lp_addition(hk in 0.1f64..10.0, hl in 0.1f64..10.0, eps in 1e-4f64..1.0, p in prop_oneof![-5.0f64..-0.2, 0.2f64..5.0]) {
        let (f, _) = orlicz_add_scalar(hk, hl, &pow(p), &pow(p), eps).unwrap();
        let want = (hk.powf(p) + eps * hl.powf(p)).powf(1.0 / p);
        prop_assert!((f - want).abs() <= 1e-12 * want);
    }
}
