use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orliczkit::bodies::random_polygon_seeded;
use orliczkit::mixed_vol::{
    hom_mixed_volume, hom_mixed_volume_polar, lp_hom_closed_form, nonhom_mixed_volume, segment_mixed_volume,
};
use orliczkit::sphere::planar;
use orliczkit::{Body, Dir, Error, OrliczFn, SphereGrid};

fn pow(p: f64) -> OrliczFn {
    OrliczFn::power_law(p, 2).unwrap()
}

fn square() -> Body {
    Body::square(1.0).unwrap()
}

fn disk() -> Body {
    Body::ball(2, 1.0).unwrap()
}

fn rect() -> Body {
    square().linear_image(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).unwrap()
}

fn phis() -> Vec<OrliczFn> {
    let mut v: Vec<OrliczFn> = [-3.0, -0.5, 0.5, 1.0, 2.0, 5.0].iter().map(|&p| pow(p)).collect();
    v.push(OrliczFn::expm1(2).unwrap());
    v
}

#[test]
fn nonhomogeneous_examples() {
    assert!((nonhom_mixed_volume(&square(), &square(), &pow(-0.5)).unwrap() - 4.0).abs() < 1e-14);
    let grid = Arc::new(SphereGrid::uniform(1024).unwrap());
    let big = Body::ball_grid(grid.clone(), 2.0).unwrap();
    let unit = Body::ball_grid(grid, 1.0).unwrap();
    assert!((nonhom_mixed_volume(&big, &unit, &pow(2.0)).unwrap() - PI).abs() < 1e-9);
    assert!((nonhom_mixed_volume(&square(), &disk(), &pow(2.0)).unwrap() - 4.0).abs() < 1e-14);
}

#[test]
fn homogeneous_examples() {
    for phi in phis() {
        let r = hom_mixed_volume(&square(), &square(), &phi).unwrap();
        assert!((r.value - 8.0).abs() < 1e-12);
        assert!(r.residual <= 1e-11);
        assert!((hom_mixed_volume(&square(), &disk(), &phi).unwrap().value - 8.0).abs() < 1e-12);
        let s = hom_mixed_volume(&square().scale(2.0).unwrap(), &square().scale(3.0).unwrap(), &phi).unwrap();
        assert!((s.value - 48.0).abs() < 1e-10);
    }
}

#[test]
fn polar_star_examples() {
    let grid = Arc::new(SphereGrid::uniform(1024).unwrap());
    let b = Body::star(grid.clone(), vec![1.0; 1024]).unwrap();
    let b2 = Body::star(grid, vec![2.0; 1024]).unwrap();
    for phi in phis() {
        assert!((hom_mixed_volume_polar(&square(), &b, &phi).unwrap().value - 8.0).abs() < 1e-10);
        assert!((hom_mixed_volume_polar(&square(), &b2, &phi).unwrap().value - 4.0).abs() < 1e-10);
    }
    // convex L: the star route and the explicit polar agree
    for seed in 0..10 {
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed + 77);
        for phi in phis() {
            let a = hom_mixed_volume_polar(&k, &l, &phi).unwrap().value;
            let b = hom_mixed_volume(&k, &l.polar().unwrap(), &phi).unwrap().value;
            assert!((a - b).abs() <= 1e-9 * b);
        }
    }
    // V̂_φ(B, vrad(L) L°) ≥ nω
    let disk_grid = Body::ball_grid(Arc::new(SphereGrid::uniform(1024).unwrap()), 1.0).unwrap();
    for seed in 0..10 {
        let l = random_polygon_seeded(seed);
        let lv = l.scale(l.vrad().unwrap()).unwrap();
        for phi in [pow(0.5), pow(1.0), pow(2.0)] {
            let v = hom_mixed_volume_polar(&disk_grid, &lv, &phi).unwrap().value;
            assert!(v >= 2.0 * PI * (1.0 - 1e-9), "{v}");
        }
    }
}

#[test]
fn segment_examples() {
    let e1 = Dir::x();
    assert!((segment_mixed_volume(&square(), &e1, &pow(1.0)).unwrap() - 2.0).abs() < 1e-12);
    assert!((segment_mixed_volume(&square(), &e1, &pow(2.0)).unwrap() - 4.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let vals: Vec<f64> = (0..32)
        .map(|_| segment_mixed_volume(&disk(), &planar(rng.random_range(0.0..2.0 * PI)), &pow(2.0)).unwrap())
        .collect();
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!((hi - lo) / lo <= 1e-9);
    assert_eq!(
        segment_mixed_volume(&square(), &e1, &pow(-0.5)).unwrap_err(),
        Error::SegmentUndefinedForDecreasing
    );
}

#[test]
fn closed_form_examples() {
    assert!((lp_hom_closed_form(&square(), &disk(), 1.0).unwrap() - 8.0).abs() < 1e-12);
    let want = 8.0 * 2.5f64.sqrt();
    assert!((lp_hom_closed_form(&square(), &rect(), 2.0).unwrap() - want).abs() < 1e-12);
    assert!((hom_mixed_volume(&square(), &rect(), &pow(2.0)).unwrap().value - want).abs() < 1e-10);
    for p in [-3.0, -0.5, 0.5, 2.0, 5.0] {
        assert!((lp_hom_closed_form(&square(), &square(), p).unwrap() - 8.0).abs() < 1e-12);
    }
}

#[test]
fn continuity_under_vertex_perturbation() {
    let k = random_polygon_seeded(4);
    let l = random_polygon_seeded(5);
    let base = hom_mixed_volume(&k, &l, &pow(2.0)).unwrap().value;
    let verts: Vec<[f64; 2]> = k.as_polygon().unwrap().vertices().iter().map(|v| [v.x, v.y]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let dirs: Vec<[f64; 2]> = verts.iter().map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let mut last = f64::INFINITY;
    for delta in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let moved: Vec<[f64; 2]> = verts.iter().zip(&dirs).map(|(v, d)| [v[0] + delta * d[0], v[1] + delta * d[1]]).collect();
        let kd = Body::polygon(&moved).unwrap();
        let err = (hom_mixed_volume(&kd, &l, &pow(2.0)).unwrap().value - base).abs();
        assert!(err < last, "δ = {delta}: {err} ≥ {last}");
        last = err;
    }
    assert!(last < 1e-4);
}

fn random_matrix(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    loop {
        let a = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-2.0f64..2.0));
        if a.determinant().abs() > 0.2 {
            return a;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_agreement(seed in 0u64..100_000, p in prop::sample::select(vec![-3.0, -0.5, 0.5, 1.0, 2.0, 5.0])) {
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed ^ 0xabcdef);
        let a = hom_mixed_volume(&k, &l, &pow(p)).unwrap().value;
        let b = lp_hom_closed_form(&k, &l, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b);
    }

    #[test]
    fn homogeneity(seed in 0u64..100_000, s in prop::sample::select(vec![0.5, 2.0, 7.0]), t in prop::sample::select(vec![0.5, 2.0, 7.0]), i in 0usize..7) {
        let phi = &phis()[i];
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed + 1);
        let base = hom_mixed_volume(&k, &l, phi).unwrap().value;
        let v = hom_mixed_volume(&k.scale(s).unwrap(), &l.scale(t).unwrap(), phi).unwrap().value;
        prop_assert!((v - s * t * base).abs() <= 1e-8 * v);
    }

    #[test]
    fn gl_equivariance(seed in 0u64..100_000, i in 0usize..7) {
        let phi = &phis()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng);
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed + 2);
        let ait = a.clone().try_inverse().unwrap().transpose();
        let lhs = hom_mixed_volume(&k.linear_image(&a).unwrap(), &l.linear_image(&ait).unwrap().polar().unwrap(), phi).unwrap().value;
        let rhs = a.determinant().abs() * hom_mixed_volume(&k, &l.polar().unwrap(), phi).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-7 * rhs);
    }

    #[test]
    fn bracket_contains_value(seed in 0u64..100_000, i in 0usize..7) {
        let r = hom_mixed_volume(&random_polygon_seeded(seed), &random_polygon_seeded(seed + 3), &phis()[i]).unwrap();
        prop_assert!(r.bracket.0 <= r.value && r.value <= r.bracket.1);
        prop_assert!(r.residual <= 1e-11);
    }

    #[test]
    fn orlicz_minkowski(seed in 0u64..100_000, p in prop::sample::select(vec![1.0, 2.0, 5.0])) {
        let k = random_polygon_seeded(seed);
        let l = random_polygon_seeded(seed + 4);
        let v = hom_mixed_volume(&k, &l, &pow(p)).unwrap().value;
        let rhs = 2.0 * k.volume().unwrap().sqrt() * l.volume().unwrap().sqrt();
        prop_assert!(v >= rhs - 1e-9 * rhs);
    }
}
