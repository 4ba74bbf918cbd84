//! Orlicz mixed volumes.
//!
//! All functionals are sums over the atoms `(u_i, S_i)` of the surface
//! measure of the first body. With `c_i = h_K(u_i) S_i / (n|K|)` and ratios
//! `r_i`, the homogeneous value is the root `λ` of
//! `G(λ) = Σ c_i φ(n|K| r_i / λ) = 1`; `G` is strictly monotone in `λ`, so
//! the root is bracketed and unique.

use serde::Serialize;

use crate::bodies::{Body, SurfaceMeasure};
use crate::error::{Error, Result};
use crate::orlicz_fn::OrliczFn;
use crate::roots::brent;
use crate::sphere::{unit_ball_volume, Dir};

/// Relative tolerance of the root in λ.
pub const ROOT_RTOL: f64 = 1e-14;
/// Largest number of bracket doublings before giving up.
pub const MAX_DOUBLINGS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedVolumeResult {
    pub value: f64,
    /// `|G(value) − 1|`.
    pub residual: f64,
    /// The a-priori bracket from the inner and outer radii.
    pub bracket: (f64, f64),
    /// True when the a-priori bracket had to be widened.
    pub bracket_expanded: bool,
    pub iterations: usize,
    /// Atoms where φ overflowed at the root and was clamped.
    pub clamped_atoms: usize,
}

/// The data of `G`: weights `c_i`, ratios `r_i` and the constant `n|K|`.
#[derive(Clone, Debug)]
pub struct Equation<'a> {
    pub phi: &'a OrliczFn,
    pub n_vol: f64,
    pub weights: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl Equation<'_> {
    /// `G(λ)` with overflowing terms clamped to `f64::MAX`; also returns
    /// the number of clamped terms. Atoms of zero weight are skipped.
    pub fn eval(&self, lambda: f64) -> Result<(f64, usize)> {
        let mut g = 0.0;
        let mut clamped = 0;
        for (c, r) in self.weights.iter().zip(&self.ratios) {
            if *c == 0.0 {
                continue;
            }
            let mut v = self.phi.eval_nonneg(self.n_vol * r / lambda)?;
            if !v.is_finite() {
                v = f64::MAX;
                clamped += 1;
            }
            g += c * v;
        }
        Ok((g.min(f64::MAX), clamped))
    }

    /// Solves `G(λ) = 1` starting from the bracket `[lo, hi]`.
    pub fn solve(&self, lo: f64, hi: f64) -> Result<MixedVolumeResult> {
        let increasing = self.phi.is_increasing();
        // ln G as a function of ln λ; decreasing for increasing φ
        let g = |s: f64| -> Result<f64> {
            let (v, _) = self.eval(s.exp())?;
            Ok(v.ln().clamp(-745.0, 745.0))
        };
        let orient = |v: f64| if increasing { v } else { -v };
        let (mut a, mut b) = (lo.ln(), hi.ln());
        let mut expanded = false;
        let mut k = 0;
        loop {
            let (ga, gb) = (orient(g(a)?), orient(g(b)?));
            if ga >= 0.0 && gb <= 0.0 {
                break;
            }
            k += 1;
            if k > MAX_DOUBLINGS {
                return Err(Error::RootNotBracketed(format!(
                    "G does not cross 1 on [{:e}, {:e}] for {}",
                    a.exp(),
                    b.exp(),
                    self.phi
                )));
            }
            expanded = true;
            if ga < 0.0 {
                a -= std::f64::consts::LN_2;
            }
            if gb > 0.0 {
                b += std::f64::consts::LN_2;
            }
        }
        // errors cannot occur past the bracket checks: same atoms, λ > 0
        let root = brent(|s| g(s).unwrap_or(f64::NAN), a, b, ROOT_RTOL, 200)?;
        let value = root.x.exp();
        let (gv, clamped) = self.eval(value)?;
        Ok(MixedVolumeResult {
            value,
            residual: (gv - 1.0).abs(),
            bracket: (lo, hi),
            bracket_expanded: expanded,
            iterations: root.iterations,
            clamped_atoms: clamped,
        })
    }
}

/// `h_L` at each atom of `sm`, reading grid samples directly when `L`
/// lives on the same grid.
pub fn support_at_atoms(l: &Body, sm: &SurfaceMeasure) -> Result<Vec<f64>> {
    if l.dim() != sm.dim() {
        return Err(Error::DimensionMismatch(sm.dim(), l.dim()));
    }
    if let Some(g) = sm.grid() {
        match l {
            Body::Grid(lg) if lg.grid().as_ref() == g.as_ref() => return Ok(lg.support_values().to_vec()),
            Body::Ball(b) => return Ok(vec![b.radius(); sm.len()]),
            _ => {}
        }
    }
    sm.directions().iter().map(|u| l.support(u)).collect()
}

/// `ρ_L` at each atom of `sm`.
pub fn radial_at_atoms(l: &Body, sm: &SurfaceMeasure) -> Result<Vec<f64>> {
    if l.dim() != sm.dim() {
        return Err(Error::DimensionMismatch(sm.dim(), l.dim()));
    }
    if let (Some(g), Body::Star(s)) = (sm.grid(), l) {
        if s.grid().as_ref() == g.as_ref() {
            return Ok(s.radial_values().to_vec());
        }
    }
    sm.directions().iter().map(|u| l.radial(u)).collect()
}

/// Bracket `[nω r_K^n r_L / R_K, nω R_K^n R_L / r_K]` for `V̂_φ(K, L)`, with
/// `(r_L, R_L)` the radii of the second body.
pub fn radius_bracket(k: &Body, r_l: f64, big_r_l: f64) -> (f64, f64) {
    let n = k.dim();
    let nw = n as f64 * unit_ball_volume(n);
    let (r, big_r) = k.inner_outer_radii();
    let ni = n as i32;
    (nw * r.powi(ni) * r_l / big_r, nw * big_r.powi(ni) * big_r_l / r)
}

/// `V_φ(K, L) = (1/n) Σ φ(h_L/h_K) h_K S_K`.
pub fn nonhom_mixed_volume(k: &Body, l: &Body, phi: &OrliczFn) -> Result<f64> {
    let sm = k.surface_measure()?;
    let hl = support_at_atoms(l, &sm)?;
    nonhom_from_atoms(&sm, &hl, phi)
}

/// `(1/n) Σ φ(h_L,i / h_K,i) h_K,i S_i` for given values `h_L,i`.
pub fn nonhom_from_atoms(sm: &SurfaceMeasure, hl: &[f64], phi: &OrliczFn) -> Result<f64> {
    let mut acc = 0.0;
    for ((h, s), l) in sm.supports().iter().zip(sm.masses()).zip(hl) {
        if *s == 0.0 {
            continue;
        }
        acc += phi.eval_nonneg(l / h)? * h * s;
    }
    Ok(acc / sm.dim() as f64)
}

fn equation_for<'a>(sm: &SurfaceMeasure, ratios: Vec<f64>, phi: &'a OrliczFn) -> Equation<'a> {
    let n_vol = sm.cone_volume() * sm.dim() as f64;
    Equation {
        phi,
        n_vol,
        weights: sm.cone_weights(),
        ratios,
    }
}

/// The homogeneous Orlicz mixed volume `V̂_φ(K, L)`.
pub fn hom_mixed_volume(k: &Body, l: &Body, phi: &OrliczFn) -> Result<MixedVolumeResult> {
    let sm = k.surface_measure()?;
    let hl = support_at_atoms(l, &sm)?;
    let ratios = hl.iter().zip(sm.supports()).map(|(a, b)| a / b).collect();
    let (r_l, big_r_l) = l.inner_outer_radii();
    let (lo, hi) = radius_bracket(k, r_l, big_r_l);
    equation_for(&sm, ratios, phi).solve(lo, hi)
}

/// `V̂_φ(K, L°)` for a star body `L`, using `h_{L°} = 1/ρ_L`.
pub fn hom_mixed_volume_polar(k: &Body, l: &Body, phi: &OrliczFn) -> Result<MixedVolumeResult> {
    let sm = k.surface_measure()?;
    let rho = radial_at_atoms(l, &sm)?;
    let ratios = rho
        .iter()
        .zip(sm.supports())
        .map(|(r, h)| 1.0 / (r * h))
        .collect();
    let (r_l, big_r_l) = l.inner_outer_radii();
    let (lo, hi) = radius_bracket(k, 1.0 / big_r_l, 1.0 / r_l);
    equation_for(&sm, ratios, phi).solve(lo, hi)
}

/// `V̂_φ(K, [0, v])`, the homogeneous mixed volume against a segment, for
/// increasing φ (with φ(0) = 0 off the hemisphere facing `v`).
///
/// Balls are evaluated with `v = e₁`, which is exact by rotation invariance.
pub fn segment_mixed_volume(k: &Body, v: &Dir, phi: &OrliczFn) -> Result<f64> {
    if phi.is_decreasing() {
        return Err(Error::SegmentUndefinedForDecreasing);
    }
    let norm = v.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("segment direction is zero".into()));
    }
    let v = match k {
        Body::Ball(_) => Dir::x(),
        _ => v / norm,
    };
    let sm = k.surface_measure()?;
    let ratios: Vec<f64> = sm
        .directions()
        .iter()
        .zip(sm.supports())
        .map(|(u, h)| u.dot(&v).max(0.0) / h)
        .collect();
    let eq = equation_for(&sm, ratios, phi);
    // first guess: the value for φ(t) = t
    let guess: f64 = sm
        .directions()
        .iter()
        .zip(sm.masses())
        .map(|(u, s)| u.dot(&v).max(0.0) * s)
        .sum();
    if !(guess > 0.0) {
        return Err(Error::InvalidInput("surface measure has no mass facing v".into()));
    }
    Ok(eq.solve(guess, guess)?.value)
}

/// `V̂_p(K, L) = (n|K|)^{1−1/p} (n V_p(K, L))^{1/p}`.
pub fn lp_hom_closed_form(k: &Body, l: &Body, p: f64) -> Result<f64> {
    let phi = OrliczFn::power_law(p, k.dim())?;
    let n = k.dim() as f64;
    let sm = k.surface_measure()?;
    let vp = nonhom_mixed_volume(k, l, &phi)?;
    let n_vol = n * sm.cone_volume();
    Ok(n_vol.powf(1.0 - 1.0 / p) * (n * vp).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::planar;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn pow(p: f64) -> OrliczFn {
        OrliczFn::power_law(p, 2).unwrap()
    }

    #[test]
    fn nonhom_examples() {
        let sq = Body::square(1.0).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        assert_eq!(nonhom_mixed_volume(&sq, &sq, &pow(-0.5)).unwrap(), 4.0);
        let big = Body::ball(2, 2.0).unwrap();
        let v = nonhom_mixed_volume(&big, &disk, &pow(2.0)).unwrap();
        assert!((v - PI).abs() < 1e-12);
        assert_eq!(nonhom_mixed_volume(&sq, &disk, &pow(2.0)).unwrap(), 4.0);
    }

    #[test]
    fn hom_examples() {
        let sq = Body::square(1.0).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        for p in [-3.0, -0.5, 0.5, 1.0, 2.0] {
            let r = hom_mixed_volume(&sq, &sq, &pow(p)).unwrap();
            assert!((r.value - 8.0).abs() < 1e-12);
            assert!(r.residual <= 1e-11);
            assert!((hom_mixed_volume(&sq, &disk, &pow(p)).unwrap().value - 8.0).abs() < 1e-12);
            let r = hom_mixed_volume(&sq.scale(2.0).unwrap(), &sq.scale(3.0).unwrap(), &pow(p)).unwrap();
            assert!((r.value - 48.0).abs() < 1e-11);
            assert!(r.bracket.0 <= r.value && r.value <= r.bracket.1);
        }
    }

    #[test]
    fn polar_examples() {
        let sq = Body::square(1.0).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        let p = pow(2.0);
        assert!((hom_mixed_volume_polar(&sq, &disk, &p).unwrap().value - 8.0).abs() < 1e-12);
        let two = Body::ball(2, 2.0).unwrap();
        assert!((hom_mixed_volume_polar(&sq, &two, &p).unwrap().value - 4.0).abs() < 1e-12);
        let hex = Body::regular_polygon(6, 1.3).unwrap();
        let a = hom_mixed_volume_polar(&sq, &hex, &p).unwrap().value;
        let b = hom_mixed_volume(&sq, &hex.polar().unwrap(), &p).unwrap().value;
        assert!((a - b).abs() < 1e-9 * b);
    }

    #[test]
    fn segment_examples() {
        let sq = Body::square(1.0).unwrap();
        let e1 = Dir::x();
        assert!((segment_mixed_volume(&sq, &e1, &pow(1.0)).unwrap() - 2.0).abs() < 1e-12);
        assert!((segment_mixed_volume(&sq, &e1, &pow(2.0)).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(
            segment_mixed_volume(&sq, &e1, &pow(-0.5)).unwrap_err(),
            Error::SegmentUndefinedForDecreasing
        );
        let disk = Body::ball(2, 1.0).unwrap();
        let a = segment_mixed_volume(&disk, &planar(0.3), &pow(2.0)).unwrap();
        let b = segment_mixed_volume(&disk, &planar(2.1), &pow(2.0)).unwrap();
        assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn lp_examples() {
        let sq = Body::square(1.0).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        assert!((lp_hom_closed_form(&sq, &disk, 1.0).unwrap() - 8.0).abs() < 1e-12);
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let l = sq.linear_image(&a).unwrap();
        let want = 8.0 * 2.5f64.sqrt();
        assert!((lp_hom_closed_form(&sq, &l, 2.0).unwrap() - want).abs() < 1e-12);
        assert!((hom_mixed_volume(&sq, &l, &pow(2.0)).unwrap().value - want).abs() < 1e-11);
    }
}
