//! Orlicz-Petty bodies: extremizers of the Orlicz mixed volume over convex
//! bodies whose polar has the volume of the unit ball.
//!
//! The constraint `|L°| = ω_n` is removed through homogeneity: for a support
//! vector `h` on the atoms of `S_K`, with `M(h) = ∩{⟨x,u_i⟩ ≤ h_i}`,
//!
//! * homogeneous: `J(h) = V̂_φ(K, M(h)) · (|M(h)°|/ω_n)^{1/n}`,
//! * nonhomogeneous: `J(h) = n V_φ(K, s·M(h))` with `s = (|M(h)°|/ω_n)^{1/n}`,
//!
//! both invariant under `h → t·h`. The polar volume is the exact area of
//! `conv{u_i/h_i}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{hausdorff_distance, to_vec2, Body, SurfaceMeasure};
use crate::error::{Error, Result};
use crate::geom2::{hull_area_with_gradient, Polygon, Vec2};
use crate::mixed_vol::{hom_mixed_volume, nonhom_mixed_volume, Equation};
use crate::optimize::{lbfgs, nelder_mead, LbfgsOptions, Minimum, NelderMeadOptions};
use crate::orlicz_fn::{check_symmetric_integrability, OrliczFn, Subclass};
use crate::sphere::{unit_ball_volume, Dir, SphereGrid};

/// Objective drop (relative to the start at `h_K`) reported as degeneracy.
pub const DEGENERACY_RATIO: f64 = 1e-6;
/// Box for sup-mode support values, relative to `vrad(K)`.
pub const SUP_BOX: f64 = 1e4;
/// Standard deviation of the log-normal start perturbations.
pub const START_SIGMA: f64 = 0.3;
/// Relative per-step decrease of `ln J` below which L-BFGS counts a stall.
const PETTY_FTOL: f64 = 1e-15;
/// Largest dimension handled by Nelder-Mead before switching to L-BFGS.
pub const SIMPLEX_MAX_DIM: usize = 16;
/// Facets of `M` shorter than this fraction of the perimeter count as collapsed.
const COLLAPSE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(rename = "hom")]
    Homogeneous,
    #[serde(rename = "nonhom")]
    Nonhomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Full,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Inf,
    Sup,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PettyOptions {
    pub starts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for PettyOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iter: 4000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Optimized,
    /// The objective fell below `DEGENERACY_RATIO` times its start value;
    /// `family` lists `(ε, J)` along `diag(ε, 1/ε)` images of K.
    Degenerate { ratio: f64, family: Vec<(f64, f64)> },
    /// Sup-mode result without an existence guarantee.
    BestEffort { bound_active: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct StartRecord {
    pub seed: u64,
    pub initial_value: f64,
    pub final_value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Realized support values, normalized so the polar volume is `ω_n`.
    pub support: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PettyResult {
    /// The extremal body, scaled so `|M°| = ω_n` (for the star solver: the
    /// star body `L` scaled so `|L| = ω_n`).
    #[serde(skip)]
    pub m: Body,
    pub value: f64,
    pub polar_residual: f64,
    pub objective_trace: Vec<f64>,
    pub starts: Vec<StartRecord>,
    /// `h_i − h_M(u_i)` for the raw optimizer vector, normalized scale.
    pub tightness: Vec<f64>,
    #[serde(skip)]
    pub directions: Vec<Dir>,
    pub masses: Vec<f64>,
    pub support: Vec<f64>,
    pub mode: Mode,
    pub cone: Cone,
    pub sense: Sense,
    pub verdict: Verdict,
    /// `J` at K itself, `n|K| vrad(K°)` in the homogeneous case.
    pub start_value: f64,
    pub flags: Vec<String>,
}

/// The discretized extremal problem.
struct Problem<'a> {
    phi: &'a OrliczFn,
    mode: Mode,
    sense: Sense,
    dim: usize,
    omega: f64,
    dirs: Vec<Vec2>,
    mass: Vec<f64>,
    hk: Vec<f64>,
    weights: Vec<f64>,
    n_vol: f64,
    /// Atom indices driven by each variable.
    groups: Vec<Vec<usize>>,
    /// Evaluate the objective at the supports of M(h) instead of raw h.
    realized: bool,
    /// `(center, half-width)` of the box on `ln h`, through a tanh map.
    bounds: Option<(f64, f64)>,
}

fn polygon_atoms(sm: &SurfaceMeasure) -> Vec<Vec2> {
    sm.directions().iter().map(to_vec2).collect()
}

impl<'a> Problem<'a> {
    fn new(k: &Body, phi: &'a OrliczFn, mode: Mode, cone: Cone, sense: Sense) -> Result<Self> {
        if k.dim() != 2 {
            return Err(Error::UnsupportedDimension(k.dim(), "2 (Petty solvers)"));
        }
        let mut sm = k.surface_measure()?;
        if cone == Cone::Symmetric && sm.grid().is_none() {
            // add the missing antipodal normals with zero mass
            let extra: Vec<Dir> = sm
                .directions()
                .iter()
                .map(|u| -u)
                .filter(|v| !sm.directions().iter().any(|u| (u - v).norm() < 1e-12))
                .collect();
            let hs = extra.iter().map(|u| k.support(u)).collect::<Result<Vec<_>>>()?;
            sm = sm.with_null_atoms(&extra, &hs);
        }
        let dirs = polygon_atoms(&sm);
        let m = dirs.len();
        let groups = match cone {
            Cone::Full => (0..m).map(|i| vec![i]).collect(),
            Cone::Symmetric => {
                let mut seen = vec![false; m];
                let mut groups = Vec::new();
                for i in 0..m {
                    if seen[i] {
                        continue;
                    }
                    let j = (0..m)
                        .find(|&j| (dirs[j] + dirs[i]).norm() < 1e-12)
                        .ok_or_else(|| Error::InvalidInput("direction set is not antipodally symmetric".into()))?;
                    seen[i] = true;
                    seen[j] = true;
                    groups.push(vec![i, j]);
                }
                groups
            }
        };
        let increasing_in_h = mode == Mode::Homogeneous || phi.is_increasing();
        let realized = match sense {
            Sense::Inf => !increasing_in_h,
            Sense::Sup => increasing_in_h,
        };
        let bounds = (sense == Sense::Sup || realized).then(|| (k.vrad().map(|v| v.ln()), SUP_BOX.ln()));
        let bounds = match bounds {
            Some((c, w)) => Some((c?, w)),
            None => None,
        };
        Ok(Self {
            phi,
            mode,
            sense,
            dim: 2,
            omega: unit_ball_volume(2),
            weights: sm.cone_weights(),
            n_vol: 2.0 * sm.cone_volume(),
            hk: sm.supports().to_vec(),
            mass: sm.masses().to_vec(),
            dirs,
            groups,
            realized,
            bounds,
        })
    }

    fn nvars(&self) -> usize {
        self.groups.len()
    }

    /// `ln h` per variable, and its derivative with respect to `z`.
    fn log_h(&self, z: f64) -> (f64, f64) {
        match self.bounds {
            None => (z, 1.0),
            Some((c, w)) => {
                let t = (z / w).tanh();
                (c + w * t, 1.0 - t * t)
            }
        }
    }

    fn z_of_log_h(&self, y: f64) -> f64 {
        match self.bounds {
            None => y,
            Some((c, w)) => w * ((y - c) / w).clamp(-0.999_999, 0.999_999).atanh(),
        }
    }

    fn expand(&self, z: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; self.dirs.len()];
        for (g, zi) in self.groups.iter().zip(z) {
            let v = self.log_h(*zi).0.exp();
            for &i in g {
                h[i] = v;
            }
        }
        h
    }

    fn polygon(&self, h: &[f64]) -> Result<Polygon> {
        Ok(Polygon::from_halfplanes_tol(&self.dirs, h, 0.0)?.0)
    }

    /// Supports of `M(h)` at every atom.
    fn realize(&self, h: &[f64]) -> Result<Vec<f64>> {
        let p = self.polygon(h)?;
        Ok(self.dirs.iter().map(|u| p.support(u)).collect())
    }

    /// `ln J(h)` and, on request, its gradient with respect to `ln h_i`.
    fn log_objective(&self, h: &[f64], grad: bool) -> Result<(f64, Option<Vec<f64>>)> {
        let h_owned;
        let h = if self.realized {
            h_owned = self.realize(h)?;
            &h_owned[..]
        } else {
            h
        };
        let pts: Vec<Vec2> = self.dirs.iter().zip(h).map(|(u, hi)| u / *hi).collect();
        let (area, ga) = hull_area_with_gradient(&pts);
        if !(area > 0.0) {
            return Err(Error::DirectionsDoNotBound);
        }
        let nf = self.dim as f64;
        // d ln A / d ln h_i = −∇_{p_i}A · p_i / A
        let dlog_area = |i: usize| -ga[i].dot(&pts[i]) / area;
        match self.mode {
            Mode::Homogeneous => {
                let ratios: Vec<f64> = h.iter().zip(&self.hk).map(|(a, b)| a / b).collect();
                let lambda = match self.phi.power_exponent() {
                    Some(p) => {
                        let s: f64 = self.weights.iter().zip(&ratios).map(|(c, r)| c * r.powf(p)).sum();
                        self.n_vol * s.powf(1.0 / p)
                    }
                    None => {
                        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min) * self.n_vol;
                        let hi = ratios.iter().cloned().fold(0.0, f64::max) * self.n_vol;
                        let eq = Equation {
                            phi: self.phi,
                            n_vol: self.n_vol,
                            weights: self.weights.clone(),
                            ratios: ratios.clone(),
                        };
                        eq.solve(lo, hi)?.value
                    }
                };
                let val = lambda.ln() + (area / self.omega).ln() / nf;
                if !grad {
                    return Ok((val, None));
                }
                let terms: Vec<f64> = self
                    .weights
                    .iter()
                    .zip(&ratios)
                    .map(|(c, r)| {
                        let t = self.n_vol * r / lambda;
                        c * self.phi.derivative(t) * t
                    })
                    .collect();
                let total: f64 = terms.iter().sum();
                let g = (0..h.len()).map(|i| terms[i] / total + dlog_area(i) / nf).collect();
                Ok((val, Some(g)))
            }
            Mode::Nonhomogeneous => {
                let s = (area / self.omega).powf(1.0 / nf);
                let mut j = 0.0;
                let mut terms = vec![0.0; h.len()];
                for i in 0..h.len() {
                    if self.mass[i] == 0.0 {
                        continue;
                    }
                    let t = s * h[i] / self.hk[i];
                    let w = self.hk[i] * self.mass[i];
                    j += self.phi.eval(t) * w;
                    if grad {
                        terms[i] = self.phi.derivative(t) * t * w;
                    }
                }
                let val = j.ln();
                if !grad {
                    return Ok((val, None));
                }
                let total: f64 = terms.iter().sum();
                let g = (0..h.len()).map(|i| (terms[i] + total * dlog_area(i) / nf) / j).collect();
                Ok((val, Some(g)))
            }
        }
    }

    /// Minimization target in the optimizer variables `z`.
    fn target(&self, z: &[f64]) -> f64 {
        let h = self.expand(z);
        match self.log_objective(&h, false) {
            Ok((v, _)) => self.orient(v),
            Err(_) => f64::INFINITY,
        }
    }

    fn target_grad(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let h = self.expand(z);
        match self.log_objective(&h, true) {
            Ok((v, Some(g))) => {
                let sign = self.orient(1.0);
                let gz = self
                    .groups
                    .iter()
                    .zip(z)
                    .map(|(grp, zi)| sign * grp.iter().map(|&i| g[i]).sum::<f64>() * self.log_h(*zi).1)
                    .collect();
                (self.orient(v), gz)
            }
            _ => (f64::INFINITY, vec![0.0; z.len()]),
        }
    }

    /// Groups with an atom whose facet of `M(h)` is absent or shorter than
    /// `COLLAPSE_TOL` relative to the perimeter.
    fn collapsed_groups(&self, h: &[f64]) -> Vec<bool> {
        let Ok((p, hull)) = Polygon::from_halfplanes_tol(&self.dirs, h, 0.0) else {
            return vec![false; self.groups.len()];
        };
        let perimeter: f64 = p.edge_lengths().iter().sum();
        let mut short = vec![true; self.dirs.len()];
        for (e, &i) in hull.iter().enumerate() {
            short[i] = p.edge_lengths()[e] < COLLAPSE_TOL * perimeter;
        }
        self.groups.iter().map(|g| g.iter().any(|&i| short[i])).collect()
    }

    /// The target restricted to `h` whose collapsed atoms sit exactly on the
    /// vertex of the remaining polygon, which makes it smooth across the kink.
    /// Returns the full `z` too.
    fn collapsed_target_grad(&self, zr: &[f64], base: &[f64], collapsed: &[bool]) -> (f64, Vec<f64>, Vec<f64>) {
        let fail = (f64::INFINITY, vec![0.0; zr.len()], base.to_vec());
        let mut z = base.to_vec();
        let free: Vec<usize> = (0..self.groups.len()).filter(|&g| !collapsed[g]).collect();
        for (&g, v) in free.iter().zip(zr) {
            z[g] = *v;
        }
        let mut h = self.expand(&z);
        let zero: Vec<usize> = self.groups.iter().zip(collapsed).filter(|(_, c)| **c).flat_map(|(g, _)| g.clone()).collect();
        let keep: Vec<usize> = (0..self.dirs.len()).filter(|i| !zero.contains(i)).collect();
        let kd: Vec<Vec2> = keep.iter().map(|&i| self.dirs[i]).collect();
        let kh: Vec<f64> = keep.iter().map(|&i| h[i]).collect();
        let Ok((p, hull)) = Polygon::from_halfplanes_tol(&kd, &kh, 0.0) else {
            return fail;
        };
        let m = hull.len();
        // d ln h_i / d ln h_a for each collapsed atom i and its two neighbours
        let mut links = Vec::with_capacity(zero.len());
        for &i in &zero {
            let u = self.dirs[i];
            let k = (0..m)
                .max_by(|&x, &y| p.vertices()[x].dot(&u).total_cmp(&p.vertices()[y].dot(&u)))
                .expect("nonempty polygon");
            let (a, b) = (keep[hull[(k + m - 1) % m]], keep[hull[k]]);
            let (ua, ub) = (self.dirs[a], self.dirs[b]);
            let det = ua.x * ub.y - ua.y * ub.x;
            // w solves [ua ub] w = u
            let w = [(u.x * ub.y - u.y * ub.x) / det, (ua.x * u.y - ua.y * u.x) / det];
            let hi = w[0] * h[a] + w[1] * h[b];
            if !(hi > 0.0) {
                return fail;
            }
            h[i] = hi;
            links.push((i, a, b, w[0] * h[a] / hi, w[1] * h[b] / hi));
        }
        for (g, c) in self.groups.iter().zip(collapsed) {
            if *c {
                z[self.groups.iter().position(|x| x == g).unwrap()] =
                    self.z_of_log_h(g.iter().map(|&i| h[i].ln()).sum::<f64>() / g.len() as f64);
            }
        }
        let Ok((v, Some(mut g))) = self.log_objective(&h, true) else {
            return fail;
        };
        for &(i, a, b, ca, cb) in &links {
            g[a] += g[i] * ca;
            g[b] += g[i] * cb;
            g[i] = 0.0;
        }
        let sign = self.orient(1.0);
        let gz = free
            .iter()
            .map(|&gi| sign * self.groups[gi].iter().map(|&i| g[i]).sum::<f64>() * self.log_h(z[gi]).1)
            .collect();
        (self.orient(v), gz, z)
    }

    fn orient(&self, v: f64) -> f64 {
        match self.sense {
            Sense::Inf => v,
            Sense::Sup => -v,
        }
    }

    fn z_from_h(&self, h: &[f64]) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| {
                let y = g.iter().map(|&i| h[i].ln()).sum::<f64>() / g.len() as f64;
                self.z_of_log_h(y)
            })
            .collect()
    }
}

/// Scale-invariant homogeneous objective `J(h)` for support values `h` on
/// the atoms of `S_K` (in the order of `K.surface_measure()`).
pub fn objective_hom(k: &Body, h: &[f64], phi: &OrliczFn) -> Result<f64> {
    objective(k, h, phi, Mode::Homogeneous)
}

/// Scale-invariant objective of either mode, evaluated at raw `h`.
pub fn objective(k: &Body, h: &[f64], phi: &OrliczFn, mode: Mode) -> Result<f64> {
    let prob = Problem::new(k, phi, mode, Cone::Full, Sense::Inf)?;
    if h.len() != prob.dirs.len() {
        return Err(Error::DimensionMismatch(prob.dirs.len(), h.len()));
    }
    if let Some(i) = h.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::OriginNotInterior(format!("h[{i}] = {} is not positive", h[i])));
    }
    let raw = Problem { realized: false, ..prob };
    Ok(raw.log_objective(h, false)?.0.exp())
}

/// The extremal sense for a class and mode, or an error for unclassified φ.
pub fn sense_for(phi: &OrliczFn, mode: Mode) -> Result<Sense> {
    match (mode, phi.subclass()) {
        (Mode::Homogeneous, Subclass::PhiHat1 | Subclass::PhiHat2) => Ok(Sense::Inf),
        (Mode::Homogeneous, Subclass::PsiHat) => Ok(Sense::Sup),
        (Mode::Nonhomogeneous, Subclass::PhiHat1 | Subclass::PsiHat) => Ok(Sense::Inf),
        (Mode::Nonhomogeneous, Subclass::PhiHat2) => Ok(Sense::Sup),
        (_, Subclass::None) => Err(Error::HypothesesNotSatisfied(format!(
            "{} belongs to none of the classes Φ̂₁, Φ̂₂, Ψ̂ in dimension {}",
            phi.spec(),
            phi.dim()
        ))),
    }
}

fn start_points(prob: &Problem, starts: usize, seed: u64) -> Vec<(u64, Vec<f64>)> {
    let base = prob.z_from_h(&prob.hk);
    let ones = prob.z_from_h(&vec![1.0; prob.dirs.len()]);
    let mut out = vec![(seed, base.clone()), (seed.wrapping_add(1), ones)];
    for k in 2..starts.max(1) {
        let s = seed.wrapping_add(k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let normal = Normal::new(0.0, START_SIGMA).expect("valid sigma");
        let z = prob
            .groups
            .iter()
            .map(|g| {
                let y = g.iter().map(|&i| prob.hk[i].ln()).sum::<f64>() / g.len() as f64;
                prob.z_of_log_h(y + normal.sample(&mut rng))
            })
            .collect();
        out.push((s, z));
    }
    out.truncate(starts.max(1));
    out
}

fn run_start(prob: &Problem, z0: &[f64], opts: &PettyOptions, target: f64) -> Minimum {
    let smooth = !prob.realized;
    let nm_opts = NelderMeadOptions {
        initial_step: 0.1,
        ftol: opts.tol * 1e-3,
        max_evaluations: opts.max_iter * (prob.nvars() + 1).min(50),
        max_restarts: 6,
        target,
    };
    let lb_opts = LbfgsOptions {
        max_iterations: opts.max_iter,
        gtol: 1e-11,
        ftol: PETTY_FTOL,
        target,
        ..Default::default()
    };
    if !smooth {
        return nelder_mead(|z| prob.target(z), z0, &nm_opts);
    }
    let mut first = if prob.nvars() <= SIMPLEX_MAX_DIM {
        nelder_mead(|z| prob.target(z), z0, &nm_opts)
    } else {
        lbfgs(|z| prob.target_grad(z), z0, &lb_opts)
    };
    if first.f < target {
        return first;
    }
    let polish = lbfgs(|z| prob.target_grad(z), &first.x, &lb_opts);
    if polish.f <= first.f {
        first.trace.extend(polish.trace.iter().skip(1));
        first.x = polish.x;
        first.f = polish.f;
        first.evaluations += polish.evaluations;
        first.iterations += polish.iterations;
        first.converged |= polish.converged;
    }
    collapse_polish(prob, &mut first, opts);
    first
}

/// Re-solves with collapsed facets pinned to their vertices; kept only when
/// the true target improves.
fn collapse_polish(prob: &Problem, best: &mut Minimum, opts: &PettyOptions) {
    let collapsed = prob.collapsed_groups(&prob.expand(&best.x));
    if !collapsed.iter().any(|c| *c) || collapsed.iter().all(|c| *c) {
        return;
    }
    let base = best.x.clone();
    let zr: Vec<f64> = (0..base.len()).filter(|&g| !collapsed[g]).map(|g| base[g]).collect();
    let lb_opts = LbfgsOptions {
        max_iterations: opts.max_iter,
        gtol: 1e-12,
        ftol: PETTY_FTOL,
        ..Default::default()
    };
    let m = lbfgs(
        |zr| {
            let (f, g, _) = prob.collapsed_target_grad(zr, &base, &collapsed);
            (f, g)
        },
        &zr,
        &lb_opts,
    );
    let z = prob.collapsed_target_grad(&m.x, &base, &collapsed).2;
    let f = prob.target(&z);
    if f <= best.f {
        best.trace.extend(m.trace.iter().skip(1));
        best.x = z;
        best.f = f;
        best.evaluations += m.evaluations;
        best.iterations += m.iterations;
    }
}

/// `(ε, J(L_ε))` along `L_ε = R diag(ε, 1/ε) Rᵀ K`, where `R` takes e₁ to the
/// normal of the heaviest atom of `S_K` when `align` is set.
pub fn diagonal_family(k: &Body, phi: &OrliczFn, mode: Mode, eps: &[f64], align: bool) -> Result<Vec<(f64, f64)>> {
    let (c, s) = if align {
        heaviest_normal(k)?
    } else {
        (1.0, 0.0)
    };
    let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    eps.iter()
        .map(|&e| {
            let d = DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e]);
            let a = &rot * d * rot.transpose();
            let l = k.linear_image(&a)?;
            Ok((e, feasible_value(k, &l, phi, mode)?))
        })
        .collect()
}

fn heaviest_normal(k: &Body) -> Result<(f64, f64)> {
    let sm = k.surface_measure()?;
    let (i, _) = sm
        .masses()
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bm), (i, m)| if *m > bm { (i, *m) } else { (bi, bm) });
    let u = sm.directions()[i];
    Ok((u.x, u.y))
}

/// `V̂_φ(K, vrad(L°)L)` or `n V_φ(K, vrad(L°)L)`: the objective at a
/// feasible body.
pub fn feasible_value(k: &Body, l: &Body, phi: &OrliczFn, mode: Mode) -> Result<f64> {
    let n = k.dim();
    let t = (l.polar_volume()? / unit_ball_volume(n)).powf(1.0 / n as f64);
    let lt = l.scale(t)?;
    match mode {
        Mode::Homogeneous => Ok(hom_mixed_volume(k, &lt, phi)?.value),
        Mode::Nonhomogeneous => Ok(n as f64 * nonhom_mixed_volume(k, &lt, phi)?),
    }
}

/// Solves for an Orlicz-Petty body of `k`.
pub fn solve_petty(k: &Body, phi: &OrliczFn, mode: Mode, cone: Cone, opts: &PettyOptions) -> Result<PettyResult> {
    if phi.dim() != k.dim() {
        return Err(Error::DimensionMismatch(k.dim(), phi.dim()));
    }
    let sense = sense_for(phi, mode)?;
    let mut flags = Vec::new();
    if cone == Cone::Symmetric && phi.subclass() == Subclass::PhiHat2 {
        if k.as_polygon().is_some() {
            flags.push("symmetric Φ̂₂ problem posed for smooth bodies; polygon given".to_string());
        }
        let grid = SphereGrid::default_for(k.dim())?;
        let report = check_symmetric_integrability(phi, &grid, &[1.0, 10.0, 100.0])?;
        if !report.satisfied {
            return Err(Error::ConditionViolated("integrability values do not decrease".into()));
        }
    }
    if sense == Sense::Sup {
        flags.push("maximizer existence unproven; best effort".to_string());
    }
    let prob = Problem::new(k, phi, mode, cone, sense)?;
    let z_k = prob.z_from_h(&prob.hk);
    let start_value = prob.log_objective(&prob.expand(&z_k), false)?.0.exp();
    let degenerate_possible = sense == Sense::Inf
        && mode == Mode::Homogeneous
        && phi.subclass() == Subclass::PhiHat2
        && cone == Cone::Full;
    let target = if degenerate_possible {
        start_value.ln() + DEGENERACY_RATIO.ln() - 1.0
    } else {
        f64::NEG_INFINITY
    };
    let target = prob.orient(1.0) * target;
    let starts = start_points(&prob, opts.starts, opts.seed);
    let runs: Vec<(u64, f64, Minimum)> = starts
        .par_iter()
        .map(|(seed, z0)| (*seed, prob.target(z0), run_start(&prob, z0, opts, target)))
        .collect();

    let mut records = Vec::with_capacity(runs.len());
    for (seed, init, m) in &runs {
        let h = prob.expand(&m.x);
        let support = match normalized_support(&prob, &h) {
            Ok(s) => s,
            Err(_) => vec![f64::NAN; h.len()],
        };
        records.push(StartRecord {
            seed: *seed,
            initial_value: prob.orient(*init).exp(),
            final_value: prob.orient(m.f).exp(),
            evaluations: m.evaluations,
            converged: m.converged,
            support,
        });
    }
    // lowest oriented value wins, ties to the lower start index
    let best = (0..runs.len())
        .min_by(|&a, &b| runs[a].2.f.total_cmp(&runs[b].2.f).then(a.cmp(&b)))
        .expect("at least one start");
    let best_run = &runs[best].2;
    let h_raw = prob.expand(&best_run.x);
    let best_log = prob.orient(best_run.f);
    let degenerate = degenerate_possible && best_log < start_value.ln() + DEGENERACY_RATIO.ln();
    let verdict = if degenerate {
        let eps: Vec<f64> = (0..=8).map(|k| 0.5f64.powi(k)).collect();
        Verdict::Degenerate {
            ratio: best_log.exp() / start_value,
            family: diagonal_family(k, phi, mode, &eps, true)?,
        }
    } else if sense == Sense::Sup || prob.bounds.is_some() {
        let bound_active = prob.bounds.is_some()
            && best_run.x.iter().any(|z| (z / SUP_BOX.ln()).tanh().abs() > 0.999);
        Verdict::BestEffort { bound_active }
    } else {
        Verdict::Optimized
    };
    let (m_poly, value, tightness, support) = match prob.polygon(&h_raw) {
        Ok(poly) => {
            let realized: Vec<f64> = prob.dirs.iter().map(|u| poly.support(u)).collect();
            let t = (poly.polar_area() / prob.omega).powf(1.0 / prob.dim as f64);
            let tightness: Vec<f64> = h_raw.iter().zip(&realized).map(|(a, b)| t * (a - b)).collect();
            // the realized vector describes the same body and never scores worse
            let realized_prob = Problem { realized: false, ..prob_clone(&prob) };
            let v_raw = prob.log_objective(&h_raw, false)?.0;
            let v_real = realized_prob.log_objective(&realized, false)?.0;
            let value = if prob.orient(v_real) <= prob.orient(v_raw) { v_real } else { v_raw }.exp();
            let support: Vec<f64> = realized.iter().map(|v| v * t).collect();
            (poly.scale(t)?, value, tightness, support)
        }
        Err(e) if degenerate => {
            // the optimizer ran off to a flat polygon; report the smallest
            // member of the diagonal family instead
            let _ = e;
            let (c, s) = heaviest_normal(k)?;
            let e = 0.5f64.powi(8);
            let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
            let a = &rot * DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e]) * rot.transpose();
            let l = k.linear_image(&a)?;
            let poly = l.as_polygon().cloned().ok_or(Error::DirectionsDoNotBound)?;
            let t = (poly.polar_area() / prob.omega).sqrt();
            let poly = poly.scale(t)?;
            let support: Vec<f64> = prob.dirs.iter().map(|u| poly.support(u)).collect();
            flags.push("optimizer left the representable range; body is the ε = 2^-8 family member".into());
            (poly, best_log.exp(), Vec::new(), support)
        }
        Err(e) => return Err(e),
    };
    let polar_residual = (m_poly.polar_area() - prob.omega).abs() / prob.omega;

    Ok(PettyResult {
        m: Body::HPolytope(m_poly),
        value,
        polar_residual,
        objective_trace: best_run.trace.iter().map(|v| prob.orient(*v).exp()).collect(),
        starts: records,
        tightness,
        directions: prob.dirs.iter().map(|u| Dir::new(u.x, u.y, 0.0)).collect(),
        masses: prob.mass.clone(),
        support,
        mode,
        cone,
        sense,
        verdict,
        start_value,
        flags,
    })
}

fn prob_clone<'a>(p: &Problem<'a>) -> Problem<'a> {
    Problem {
        phi: p.phi,
        mode: p.mode,
        sense: p.sense,
        dim: p.dim,
        omega: p.omega,
        dirs: p.dirs.clone(),
        mass: p.mass.clone(),
        hk: p.hk.clone(),
        weights: p.weights.clone(),
        n_vol: p.n_vol,
        groups: p.groups.clone(),
        realized: p.realized,
        bounds: p.bounds,
    }
}

fn normalized_support(prob: &Problem, h: &[f64]) -> Result<Vec<f64>> {
    let poly = prob.polygon(h)?;
    let t = (poly.polar_area() / prob.omega).powf(0.5);
    Ok(prob.dirs.iter().map(|u| t * poly.support(u)).collect())
}

impl PettyResult {
    /// The body reached by start `i`, normalized like `m`.
    pub fn start_body(&self, i: usize) -> Result<Body> {
        let normals: Vec<[f64; 2]> = self.directions.iter().map(|u| [u.x, u.y]).collect();
        Body::hpolytope(&normals, &self.starts[i].support)
    }

    /// Largest pairwise Hausdorff distance between the bodies of all starts.
    pub fn start_spread(&self) -> Result<f64> {
        let bodies = (0..self.starts.len()).map(|i| self.start_body(i)).collect::<Result<Vec<_>>>()?;
        let mut d: f64 = 0.0;
        for i in 0..bodies.len() {
            for j in i + 1..bodies.len() {
                d = d.max(hausdorff_distance(&bodies[i], &bodies[j])?);
            }
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    /// Slack at atoms with positive mass.
    pub max_atom_slack: f64,
    pub min_slack: f64,
    pub value: f64,
    /// Value with extra zero-mass normals added to K.
    pub enriched_value: f64,
    pub drift: f64,
    pub holds: bool,
}

/// Checks the circumscribed-polytope property of a full-cone result and that
/// extra zero-mass normals leave the optimum unchanged.
pub fn tightness_check(k: &Body, phi: &OrliczFn, result: &PettyResult, extra_normals: &[Dir], opts: &PettyOptions) -> Result<TightnessReport> {
    if k.as_polygon().is_none() || result.cone != Cone::Full {
        return Err(Error::Unsupported("tightness check needs a polytope and the full cone".into()));
    }
    let scale = k.inner_outer_radii().1;
    let max_atom_slack = result
        .tightness
        .iter()
        .zip(&result.masses)
        .filter(|(_, m)| **m > 0.0)
        .map(|(s, _)| *s)
        .fold(0.0, f64::max);
    let min_slack = result.tightness.iter().cloned().fold(f64::INFINITY, f64::min);
    let sm = k.surface_measure()?;
    let hs = extra_normals.iter().map(|u| k.support(u)).collect::<Result<Vec<_>>>()?;
    let enriched_sm = sm.with_null_atoms(extra_normals, &hs);
    let enriched_value = solve_on_measure(k, enriched_sm, phi, result.mode, opts)?;
    let drift = (enriched_value - result.value).abs() / result.value;
    Ok(TightnessReport {
        max_atom_slack,
        min_slack,
        value: result.value,
        enriched_value,
        drift,
        holds: max_atom_slack <= 1e-6 * scale && min_slack >= -1e-9 * scale && drift <= 1e-6,
    })
}

fn solve_on_measure(k: &Body, sm: SurfaceMeasure, phi: &OrliczFn, mode: Mode, opts: &PettyOptions) -> Result<f64> {
    let sense = sense_for(phi, mode)?;
    let mut prob = Problem::new(k, phi, mode, Cone::Full, sense)?;
    prob.dirs = polygon_atoms(&sm);
    prob.mass = sm.masses().to_vec();
    prob.hk = sm.supports().to_vec();
    prob.weights = sm.cone_weights();
    prob.groups = (0..prob.dirs.len()).map(|i| vec![i]).collect();
    let starts = start_points(&prob, opts.starts, opts.seed);
    let best = starts
        .par_iter()
        .map(|(_, z0)| run_start(&prob, z0, opts, f64::NEG_INFINITY).f)
        .reduce(|| f64::INFINITY, f64::min);
    Ok(prob.orient(best).exp())
}

/// Star-body relaxation: extremizes `vrad(L)·V̂_φ(K, L°)` over radial
/// functions `ρ` sampled on `grid` (linear in angle between nodes).
pub fn solve_affine_star(k: &Body, phi: &OrliczFn, grid: &SphereGrid, opts: &PettyOptions) -> Result<PettyResult> {
    if k.dim() != 2 || grid.dim() != 2 {
        return Err(Error::UnsupportedDimension(k.dim().max(grid.dim()), "2 (star solver)"));
    }
    let sense = match phi.subclass() {
        Subclass::PhiHat1 | Subclass::PhiHat2 => Sense::Inf,
        Subclass::PsiHat => Sense::Sup,
        Subclass::None => return sense_for(phi, Mode::Homogeneous).map(|_| unreachable!()),
    };
    let sm = k.surface_measure()?;
    let m = grid.len();
    let atoms: Vec<(usize, f64)> = sm.directions().iter().map(|u| grid.locate(u)).collect();
    let weights = sm.cone_weights();
    let n_vol = 2.0 * sm.cone_volume();
    let hk = sm.supports().to_vec();
    let omega = PI;
    let w = SUP_BOX.ln();
    let vrad_k = k.vrad()?;
    let center = -vrad_k.ln();
    let rho_of = |z: &[f64]| -> (Vec<f64>, Vec<f64>) {
        z.iter()
            .map(|zi| {
                let t = (zi / w).tanh();
                ((center + w * t).exp(), 1.0 - t * t)
            })
            .unzip()
    };
    let eval = |z: &[f64], grad: bool| -> (f64, Vec<f64>) {
        let (rho, dz) = rho_of(z);
        let at: Vec<f64> = atoms.iter().map(|(j, a)| (1.0 - a) * rho[*j] + a * rho[(j + 1) % m]).collect();
        let ratios: Vec<f64> = at.iter().zip(&hk).map(|(r, h)| 1.0 / (r * h)).collect();
        let lambda = match phi.power_exponent() {
            Some(p) => n_vol * weights.iter().zip(&ratios).map(|(c, r)| c * r.powf(p)).sum::<f64>().powf(1.0 / p),
            None => {
                let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min) * n_vol;
                let hi = ratios.iter().cloned().fold(0.0, f64::max) * n_vol;
                let eq = Equation { phi, n_vol, weights: weights.clone(), ratios: ratios.clone() };
                match eq.solve(lo, hi) {
                    Ok(r) => r.value,
                    Err(_) => return (f64::INFINITY, vec![0.0; z.len()]),
                }
            }
        };
        let vol_sum: f64 = grid.weights().iter().zip(&rho).map(|(wj, r)| wj * r * r).sum();
        let val = lambda.ln() + ((vol_sum / 2.0) / omega).ln() / 2.0;
        let sign = if sense == Sense::Inf { 1.0 } else { -1.0 };
        if !grad {
            return (sign * val, Vec::new());
        }
        let terms: Vec<f64> = weights
            .iter()
            .zip(&ratios)
            .map(|(c, r)| {
                let t = n_vol * r / lambda;
                c * phi.derivative(t) * t
            })
            .collect();
        let total: f64 = terms.iter().sum();
        let mut g = vec![0.0; m];
        for (j, (wj, r)) in grid.weights().iter().zip(&rho).enumerate() {
            g[j] += wj * r * r / vol_sum;
        }
        for (i, (j, a)) in atoms.iter().enumerate() {
            let gi = terms[i] / total;
            let k2 = (j + 1) % m;
            g[*j] -= gi * (1.0 - a) * rho[*j] / at[i];
            g[k2] -= gi * a * rho[k2] / at[i];
        }
        let gz = g.iter().zip(&dz).map(|(gj, d)| sign * gj * d).collect();
        (sign * val, gz)
    };
    let to_z = |rho: &[f64]| -> Vec<f64> {
        rho.iter().map(|r| w * ((r.ln() - center) / w).clamp(-0.999_999, 0.999_999).atanh()).collect()
    };
    // starts: L = K° and L = vrad-ball, then perturbations of K°
    let rho_polar: Vec<f64> = grid.nodes().iter().map(|u| k.support(u).map(|h| 1.0 / h)).collect::<Result<_>>()?;
    let mut starts = vec![(opts.seed, to_z(&rho_polar)), (opts.seed.wrapping_add(1), to_z(&vec![1.0 / vrad_k; m]))];
    for s in 2..opts.starts.max(1) {
        let seed = opts.seed.wrapping_add(s as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, START_SIGMA).expect("valid sigma");
        let rho: Vec<f64> = rho_polar.iter().map(|r| r * normal.sample(&mut rng).exp()).collect();
        starts.push((seed, to_z(&rho)));
    }
    starts.truncate(opts.starts.max(1));
    let lb_opts = LbfgsOptions { max_iterations: opts.max_iter, gtol: 1e-11, ftol: PETTY_FTOL, ..Default::default() };
    let runs: Vec<(u64, f64, Minimum)> = starts
        .par_iter()
        .map(|(seed, z0)| (*seed, eval(z0, false).0, lbfgs(|z| eval(z, true), z0, &lb_opts)))
        .collect();
    let sign = if sense == Sense::Inf { 1.0 } else { -1.0 };
    let best = (0..runs.len())
        .min_by(|&a, &b| runs[a].2.f.total_cmp(&runs[b].2.f).then(a.cmp(&b)))
        .expect("at least one start");
    let (rho, _) = rho_of(&runs[best].2.x);
    let vol = grid.weights().iter().zip(&rho).map(|(wj, r)| wj * r * r).sum::<f64>() / 2.0;
    let t = (omega / vol).sqrt();
    let rho_n: Vec<f64> = rho.iter().map(|r| r * t).collect();
    let star = Body::star(std::sync::Arc::new(grid.clone()), rho_n.clone())?;
    let polar_residual = (star.volume()? - omega).abs() / omega;
    let bound_active = runs[best].2.x.iter().any(|z| (z / w).tanh().abs() > 0.999);
    let records = runs
        .iter()
        .map(|(seed, init, mm)| {
            let (r, _) = rho_of(&mm.x);
            let v = grid.weights().iter().zip(&r).map(|(wj, x)| wj * x * x).sum::<f64>() / 2.0;
            let tt = (omega / v).sqrt();
            StartRecord {
                seed: *seed,
                initial_value: (sign * init).exp(),
                final_value: (sign * mm.f).exp(),
                evaluations: mm.evaluations,
                converged: mm.converged,
                support: r.iter().map(|x| x * tt).collect(),
            }
        })
        .collect();
    let mut flags = Vec::new();
    if bound_active {
        flags.push("radial values reached the box [1e-4, 1e4]/vrad(K)".to_string());
    }
    if sense == Sense::Sup {
        flags.push("maximizer existence unproven; best effort".to_string());
    }
    let start_value = (sign * runs[0].1).exp();
    Ok(PettyResult {
        m: star,
        value: (sign * runs[best].2.f).exp(),
        polar_residual,
        objective_trace: runs[best].2.trace.iter().map(|v| (sign * v).exp()).collect(),
        starts: records,
        tightness: Vec::new(),
        directions: grid.nodes().to_vec(),
        masses: Vec::new(),
        support: rho_n,
        mode: Mode::Homogeneous,
        cone: Cone::Full,
        sense,
        verdict: if sense == Sense::Sup || bound_active {
            Verdict::BestEffort { bound_active }
        } else {
            Verdict::Optimized
        },
        start_value,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(p: f64) -> OrliczFn {
        OrliczFn::power_law(p, 2).unwrap()
    }

    #[test]
    fn square_objective_closed_form() {
        let k = Body::square(1.0).unwrap();
        let want = 8.0 * (2.0 / PI).sqrt();
        for s in [0.3, 1.0, 4.0] {
            let j = objective_hom(&k, &[s; 4], &pow(1.0)).unwrap();
            assert!((j - want).abs() < 1e-13);
        }
        let h = [0.7, 1.3, 0.9, 1.1];
        let h3: Vec<f64> = h.iter().map(|v| 3.0 * v).collect();
        let a = objective_hom(&k, &h, &pow(2.0)).unwrap();
        assert!((a - objective_hom(&k, &h3, &pow(2.0)).unwrap()).abs() < 1e-10 * a);
    }

    #[test]
    fn gradient_matches_differences() {
        let k = crate::bodies::random_polygon_seeded(3);
        for (phi, mode) in [
            (pow(2.0), Mode::Homogeneous),
            (OrliczFn::expm1(2).unwrap(), Mode::Homogeneous),
            (pow(0.5), Mode::Nonhomogeneous),
        ] {
            let prob = Problem::new(&k, &phi, mode, Cone::Full, Sense::Inf).unwrap();
            let z: Vec<f64> = prob.z_from_h(&prob.hk).iter().enumerate().map(|(i, v)| v + 0.05 * (i as f64).sin()).collect();
            let (_, g) = prob.target_grad(&z);
            for i in 0..z.len() {
                let mut zp = z.clone();
                zp[i] += 1e-6;
                let mut zm = z.clone();
                zm[i] -= 1e-6;
                let fd = (prob.target(&zp) - prob.target(&zm)) / 2e-6;
                assert!((fd - g[i]).abs() < 1e-6, "{} {} {}", phi, fd, g[i]);
            }
        }
    }

    #[test]
    fn square_petty_body() {
        let k = Body::square(1.0).unwrap();
        let r = solve_petty(&k, &pow(1.0), Mode::Homogeneous, Cone::Full, &PettyOptions::default()).unwrap();
        assert!((r.value - 8.0 * (2.0 / PI).sqrt()).abs() < 1e-8);
        assert!(r.support.iter().all(|h| (h - (2.0 / PI).sqrt()).abs() < 1e-6));
        assert!(r.polar_residual < 1e-12);
        assert!(r.tightness.iter().all(|s| s.abs() < 1e-9));
    }

    #[test]
    fn degenerate_on_polytopes() {
        let k = Body::square(1.0).unwrap();
        let r = solve_petty(&k, &pow(-0.5), Mode::Homogeneous, Cone::Full, &PettyOptions::default()).unwrap();
        assert!(matches!(r.verdict, Verdict::Degenerate { .. }), "{:?}", r.value / r.start_value);
    }

    #[test]
    fn star_solver_on_disk() {
        let g = SphereGrid::uniform(256).unwrap();
        let k = Body::ball_on(std::sync::Arc::new(g.clone()), 1.0).unwrap();
        let opts = PettyOptions { starts: 2, ..Default::default() };
        let r = solve_affine_star(&k, &pow(1.0), &g, &opts).unwrap();
        assert!((r.value - 2.0 * PI).abs() < 1e-9, "{}", r.value);
    }
}
