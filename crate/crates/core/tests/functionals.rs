use std::f64::consts::PI;
use std::sync::Arc;

use orliczkit::bodies::random_polygon_seeded;
use orliczkit::functionals::{
    affine, certify, cnp_constant, cyclic_condition, degeneracy_schedule, geominimal, probe_continuity, probe_degeneracy,
    projection_integral, CertifyInputs, Family, Inequality,
};
use orliczkit::petty::{feasible_value, Cone, Mode, PettyOptions};
use orliczkit::sphere::planar;
use orliczkit::{Body, Dir, Error, OrliczFn, SphereGrid};

fn pow(p: f64) -> OrliczFn {
    OrliczFn::power_law(p, 2).unwrap()
}

fn opts() -> PettyOptions {
    PettyOptions::default()
}

fn square() -> Body {
    Body::square(1.0).unwrap()
}

fn g_hom(k: &Body, phi: &OrliczFn) -> f64 {
    geominimal(k, phi, Mode::Homogeneous, Cone::Full, &opts()).unwrap().value
}

#[test]
fn geominimal_examples() {
    let grid = Arc::new(SphereGrid::uniform(512).unwrap());
    let b = Body::ball_on(grid.clone(), 1.0).unwrap();
    assert!((g_hom(&b, &pow(1.0)) - 2.0 * PI).abs() < 1e-4);
    assert!((g_hom(&square(), &pow(1.0)) - 8.0 * (2.0 / PI).sqrt()).abs() < 1e-9);
    let bg = Body::ball_grid(grid, 1.0).unwrap();
    let sym = geominimal(&bg, &pow(-0.5), Mode::Homogeneous, Cone::Symmetric, &opts()).unwrap();
    assert!((sym.value - 2.0 * PI).abs() < 1e-3, "{}", sym.value);
}

#[test]
fn affine_examples() {
    let grid = SphereGrid::uniform(256).unwrap();
    let b = Body::ball(2, 1.0).unwrap();
    assert!((affine(&b, &pow(1.0), Some(&grid), &opts()).unwrap().value - 2.0 * PI).abs() < 1e-6);
    let k = random_polygon_seeded(3);
    let base = affine(&k, &pow(1.0), Some(&grid), &opts()).unwrap().value;
    let scaled = affine(&k.scale(3.0).unwrap(), &pow(1.0), Some(&grid), &opts()).unwrap().value;
    assert!((scaled - 3.0 * base).abs() <= 1e-5 * scaled);
    let sq = affine(&square(), &pow(1.0), Some(&grid), &opts()).unwrap().value;
    assert!(sq <= g_hom(&square(), &pow(1.0)) + 1e-9);
}

#[test]
fn order_and_upper_bounds() {
    let grid = SphereGrid::uniform(256).unwrap();
    for seed in 0..3 {
        let k = random_polygon_seeded(seed);
        for phi in [pow(0.5), pow(2.0)] {
            let g = g_hom(&k, &phi);
            let o = affine(&k, &phi, Some(&grid), &opts()).unwrap().value;
            assert!(o <= g * (1.0 + 1e-9));
            let cap = 2.0 * k.volume().unwrap() * (k.polar_volume().unwrap() / PI).sqrt();
            assert!(g <= cap * (1.0 + 1e-12));
        }
        // reversed for Ψ̂
        let psi = pow(-3.0);
        let g = g_hom(&k, &psi);
        let o = affine(&k, &psi, Some(&grid), &opts()).unwrap().value;
        assert!(o >= g * (1.0 - 1e-9), "{o} < {g}");
        assert!(g >= feasible_value(&k, &k, &psi, Mode::Homogeneous).unwrap() * (1.0 - 1e-12));
    }
}

#[test]
fn geominimal_homogeneity() {
    let k = random_polygon_seeded(8);
    let base = g_hom(&k, &pow(2.0));
    for lam in [0.5, 3.0] {
        let v = g_hom(&k.scale(lam).unwrap(), &pow(2.0));
        assert!((v - lam * base).abs() <= 1e-5 * v);
    }
}

#[test]
fn nonhomogeneous_ball_witness() {
    let grid = Arc::new(SphereGrid::uniform(1024).unwrap());
    let phi = pow(2.0);
    for r in [0.5, 2.0] {
        let k = Body::ball_grid(grid.clone(), r).unwrap();
        let g = geominimal(&k, &phi, Mode::Nonhomogeneous, Cone::Full, &opts()).unwrap().value;
        let want = phi.eval(1.0 / r) * r * r * 2.0 * PI;
        assert!((g - want).abs() <= 1e-4 * want);
    }
}

#[test]
fn certificate_examples() {
    let sq = square();
    let c = certify(Inequality::Isoperimetric, &CertifyInputs::new(&sq, &pow(1.0))).unwrap();
    assert!((c.lhs - 8.0 * (2.0 / PI).sqrt() / (2.0 * PI)).abs() < 1e-9);
    assert!((c.rhs - (4.0 / PI).sqrt()).abs() < 1e-12);
    assert!(c.holds && c.hypotheses.iter().all(|h| h.1));

    let c = certify(Inequality::Mahler, &CertifyInputs::new(&sq, &pow(1.0))).unwrap();
    assert!((c.lhs - 8.0).abs() < 1e-6 && (c.rhs - 8.0).abs() < 1e-12 && c.holds);

    let (phi, psi) = (pow(0.5), pow(2.0));
    assert_eq!(cyclic_condition(&phi, &psi).unwrap(), ("c", true));
    for seed in 0..3 {
        let k = random_polygon_seeded(seed);
        let inp = CertifyInputs { psi: Some(&psi), ..CertifyInputs::new(&k, &phi) };
        assert!(certify(Inequality::Cyclic, &inp).unwrap().holds);
    }

    let santalo = certify(Inequality::Santalo, &CertifyInputs::new(&random_polygon_seeded(2), &pow(1.0))).unwrap();
    assert!(santalo.holds && santalo.lhs <= 1.0);

    let l = random_polygon_seeded(5);
    let k = random_polygon_seeded(6);
    let phi = pow(2.0);
    for which in [Inequality::Minkowski, Inequality::Bracket] {
        let inp = CertifyInputs { l: Some(&l), ..CertifyInputs::new(&k, &phi) };
        assert!(certify(which, &inp).unwrap().holds);
    }
}

#[test]
fn certificate_hypotheses() {
    let sq = square();
    assert!(matches!(
        certify(Inequality::Mahler, &CertifyInputs::new(&sq, &pow(0.5))),
        Err(Error::HypothesesNotSatisfied(_))
    ));
    assert!(matches!(
        certify(Inequality::Isoperimetric, &CertifyInputs::new(&sq, &pow(-3.0))),
        Err(Error::Unsupported(_))
    ));
    // H(t) = t^4 is convex, so condition c fails for (pow:2, pow:1/2)
    assert_eq!(cyclic_condition(&pow(2.0), &pow(0.5)).unwrap(), ("c", false));
    let (phi, psi) = (pow(2.0), pow(0.5));
    let inp = CertifyInputs { psi: Some(&psi), ..CertifyInputs::new(&sq, &phi) };
    assert!(matches!(certify(Inequality::Cyclic, &inp), Err(Error::HypothesesNotSatisfied(_))));
    assert_eq!("santalo".parse::<Inequality>().unwrap(), Inequality::Santalo);
    assert!("nope".parse::<Inequality>().is_err());
}

#[test]
fn certificate_digest_is_stable() {
    let k = random_polygon_seeded(1);
    let a = certify(Inequality::Mahler, &CertifyInputs::new(&k, &pow(2.0))).unwrap();
    let b = certify(Inequality::Mahler, &CertifyInputs::new(&k, &pow(2.0))).unwrap();
    assert_eq!(a.inputs_digest, b.inputs_digest);
    assert_eq!(a.inputs_digest.len(), 64);
    let c = certify(Inequality::Mahler, &CertifyInputs::new(&k, &pow(1.0))).unwrap();
    assert_ne!(a.inputs_digest, c.inputs_digest);
}

#[test]
fn continuity_families() {
    let r = probe_continuity(&Family::Constant(square(), 3), &pow(1.0), &opts(), 1e-9).unwrap();
    assert!(r.column("abs_error").unwrap().iter().all(|e| *e == 0.0));
    assert!(r.verdict);

    let deltas = vec![1e-1, 1e-2, 1e-3, 1e-4];
    let fam = Family::Perturbed { base: square(), deltas: deltas.clone(), seed: 0 };
    let r = probe_continuity(&fam, &pow(1.0), &opts(), 1e-3).unwrap();
    let err = r.column("abs_error").unwrap();
    for (e, d) in err.iter().zip(&deltas) {
        assert!(*e <= 20.0 * d, "drift {e} at δ = {d}");
    }
    assert!(r.verdict, "{} {:?}", r.verdict_detail, err);
    let csv = r.to_csv();
    assert!(csv.starts_with("delta,hausdorff,geominimal,abs_error\n"));
    assert_eq!(csv.lines().count(), 5);

    assert!(matches!(
        probe_continuity(&Family::Constant(square(), 2), &pow(-0.5), &opts(), 1e-3),
        Err(Error::HypothesesNotSatisfied(_))
    ));
}

#[test]
fn degeneracy_columns() {
    let sq = square();
    let r = probe_degeneracy(&sq, &pow(-0.5), &degeneracy_schedule()).unwrap();
    let hom = r.column("hom").unwrap();
    let nonhom = r.column("nonhom").unwrap();
    assert!(hom.windows(2).all(|w| w[1] < w[0]));
    assert!(nonhom.windows(2).all(|w| w[1] > w[0]));
    // ε = 1 is K itself
    let first = 8.0 * (sq.polar_volume().unwrap() / PI).sqrt();
    assert!((hom[0] - first).abs() < 1e-12);
    assert!(matches!(probe_degeneracy(&sq, &pow(1.0), &[1.0, 0.5]), Err(Error::HypothesesNotSatisfied(_))));
}

/// The homogeneous column decays like ε and the nonhomogeneous one grows like
/// ε^{-1/2}.
#[test]
fn degeneracy_rates() {
    let eps: Vec<f64> = (0..=18).map(|k| 0.5f64.powi(k)).collect();
    let r = probe_degeneracy(&square(), &pow(-0.5), &eps).unwrap();
    let hom = r.column("hom").unwrap();
    let nonhom = r.column("nonhom").unwrap();
    for k in 10..18 {
        let h = (hom[k + 1] / hom[k]).log2();
        let g = (nonhom[k + 1] / nonhom[k]).log2();
        assert!((h + 1.0).abs() < 2e-3, "hom slope {h}");
        assert!((g - 0.5).abs() < 2e-3, "nonhom slope {g}");
    }
}

#[test]
fn projection_constant() {
    let a = projection_integral(-0.5, &Dir::x(), 2).unwrap();
    let b = projection_integral(-0.5, &planar(0.7), 2).unwrap();
    assert!((a - b).abs() <= 1e-8 * a);
    let near_zero = projection_integral(-1e-6, &Dir::x(), 2).unwrap();
    assert!((near_zero - 2.0 * PI).abs() < 1e-4);
    assert!(projection_integral(-1.0, &Dir::x(), 2).is_err());

    let grid = SphereGrid::uniform(1024).unwrap();
    let r = cnp_constant(-0.5, &grid, 16, 3).unwrap();
    assert!(r.verdict);
    assert_eq!(r.column("value").unwrap().len(), 16);
}
