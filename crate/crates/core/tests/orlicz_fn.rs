use proptest::prelude::*;

use orliczkit::orlicz_fn::{check_symmetric_integrability, classify, classify_fn, parse_real, Subclass};
use orliczkit::{Error, OrliczFn, SphereGrid};

fn pow(p: f64) -> OrliczFn {
    OrliczFn::power_law(p, 2).unwrap()
}

#[test]
fn power_law_tags() {
    let t = pow(2.0);
    assert!(t.is_increasing());
    assert_eq!(t.subclass(), Subclass::PhiHat1);
    assert!(t.tags().phi_convex);
    assert_eq!(t.derivatives_at_one(), (2.0, 2.0));

    let t = pow(-0.5);
    assert!(t.is_decreasing());
    assert_eq!(t.subclass(), Subclass::PhiHat2);
    assert!(t.tags().f_strictly_concave);

    let t = pow(-3.0);
    assert!(t.is_decreasing());
    assert_eq!(t.subclass(), Subclass::PsiHat);
    assert!(t.tags().f_strictly_convex);

    let t = pow(-2.0);
    assert!(t.tags().boundary_case);
    assert_eq!(t.subclass(), Subclass::None);

    assert!(matches!(OrliczFn::power_law(0.0, 2), Err(Error::InvalidPhi(_))));
}

#[test]
fn numeric_classification() {
    let e = classify(&OrliczFn::expm1(2).unwrap(), 2).unwrap();
    assert!(e.is_increasing() && e.phi_convex && e.numeric);
    assert_eq!(e.subclass, Subclass::PhiHat1);

    let id = classify_fn(&|t| t, 2).unwrap();
    assert_eq!(id.subclass, Subclass::PhiHat1);
    assert!(id.f_strictly_convex);

    let root = classify_fn(&|t: f64| t.sqrt(), 2).unwrap();
    assert_eq!(root.subclass, Subclass::PhiHat1);
    assert!(root.phi_concave && !root.phi_convex);

    // numeric and closed-form verdicts agree on the power family
    for p in [-5.0, -3.0, -1.5, -0.5, 0.5, 1.0, 3.0] {
        let numeric = classify(&pow(p), 2).unwrap();
        assert_eq!(numeric.subclass, pow(p).subclass(), "p = {p}");
    }

    assert!(matches!(classify_fn(&|_| f64::NAN, 2), Err(Error::NotClassifiable(_))));
}

#[test]
fn zero_conventions() {
    assert_eq!(pow(2.0).eval_nonneg(0.0).unwrap(), 0.0);
    assert_eq!(pow(-0.5).eval_nonneg(0.0).unwrap_err(), Error::PhiUndefinedAtZero);
}

#[test]
fn spec_strings() {
    assert_eq!(OrliczFn::parse("pow:-1/2", 2).unwrap().power_exponent(), Some(-0.5));
    assert_eq!(OrliczFn::parse("expm1", 2).unwrap().spec(), "expm1");
    assert!(OrliczFn::parse("log", 2).is_err());
    assert_eq!(parse_real(" 3/4 "), Some(0.75));
    assert_eq!(parse_real("1/0"), None);
}

#[test]
fn tables() {
    let sq = OrliczFn::table("sq", &[(0.5, 0.25), (1.0, 1.0), (2.0, 4.0), (4.0, 16.0)], 2).unwrap();
    assert!((sq.eval(3.0) - 9.0).abs() < 1e-12);
    assert!(sq.is_increasing());
    assert_eq!(sq.subclass(), Subclass::PhiHat1);
    let kinked = OrliczFn::table("kink", &[(0.5, 0.5), (1.0, 1.0), (2.0, 4.0)], 2).unwrap();
    let (l, r) = kinked.derivatives_at_one();
    assert!((l - 1.0).abs() < 1e-12 && (r - 2.0).abs() < 1e-12);
    assert!(OrliczFn::table("bad", &[(0.5, 1.0), (1.0, 1.0)], 2).is_err());
    assert!(OrliczFn::table("unnormalized", &[(0.5, 1.0), (1.0, 2.0)], 2).is_err());
}

#[test]
fn integrability() {
    let grid = SphereGrid::uniform(1024).unwrap();
    let r = check_symmetric_integrability(&pow(-0.5), &grid, &[1.0, 10.0, 100.0]).unwrap();
    assert!(r.satisfied);
    assert!(r.values.windows(2).all(|w| w[1] < w[0]));
    // I(s) = s^{-1/2} I(1)
    assert!((r.values[2] * 10.0 - r.values[0]).abs() < 1e-9 * r.values[0]);

    let bad = check_symmetric_integrability(&pow(-2.0), &grid, &[1.0, 10.0]);
    assert!(matches!(bad, Err(Error::ConditionViolated(_))));
}

proptest! {
    #[test]
    fn monotone_on_samples(p in prop_oneof![-6.0f64..-0.1, 0.1f64..6.0], a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        prop_assume!(a < b * (1.0 - 1e-9));
        let phi = pow(p);
        if phi.is_increasing() {
            prop_assert!(phi.eval(a) < phi.eval(b));
        } else {
            prop_assert!(phi.eval(a) > phi.eval(b));
        }
        prop_assert_eq!(pow(p).is_increasing(), pow(-p).is_decreasing());
    }

    #[test]
    fn derivative_at_one_matches_differences(p in prop_oneof![-6.0f64..-0.1, 0.1f64..6.0]) {
        let phi = pow(p);
        let h = 1e-7;
        let right = (phi.eval(1.0 + h) - phi.eval(1.0)) / h;
        prop_assert!((right - phi.derivatives_at_one().1).abs() <= 1e-6 * p.abs().max(1.0));
    }

    #[test]
    fn inverse_round_trips(p in prop_oneof![-6.0f64..-0.1, 0.1f64..6.0], t in 0.01f64..100.0) {
        let phi = pow(p);
        let back = phi.inverse(phi.eval(t)).unwrap();
        prop_assert!((back - t).abs() <= 1e-9 * t);
    }
}
