//! Orlicz geominimal and affine surface areas, inequality certificates, and
//! continuity, degeneracy and projection-constant probes.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bodies::{hausdorff_distance, Body};
use crate::error::{Error, Result};
use crate::io::body_to_json;
use crate::mixed_vol::{hom_mixed_volume, radius_bracket};
use crate::orlicz_fn::{classify_fn, OrliczFn, Subclass};
use crate::petty::{diagonal_family, solve_affine_star, solve_petty, Cone, Mode, PettyOptions, PettyResult};
use crate::quad::graded_toward_zero;
use crate::sphere::{sphere_area, unit_ball_volume, Dir, SphereGrid};

/// Orlicz geominimal surface area: `Ĝ_φ` (homogeneous) or `G_φ`
/// (nonhomogeneous), over the full or the origin-symmetric cone.
pub fn geominimal(k: &Body, phi: &OrliczFn, mode: Mode, cone: Cone, opts: &PettyOptions) -> Result<PettyResult> {
    solve_petty(k, phi, mode, cone, opts)
}

/// Orlicz affine surface area `Ω̂_φ` via the star-body relaxation. Without a
/// grid, the grid of `k` is used, else 1024 uniform directions.
pub fn affine(k: &Body, phi: &OrliczFn, grid: Option<&SphereGrid>, opts: &PettyOptions) -> Result<PettyResult> {
    let own;
    let grid = match grid {
        Some(g) => g,
        None => {
            own = match k {
                Body::Grid(g) => (**g.grid()).clone(),
                Body::Ball(b) => (**b.grid()).clone(),
                _ => SphereGrid::uniform(crate::sphere::DEFAULT_UNIFORM_NODES)?,
            };
            &own
        }
    };
    solve_affine_star(k, phi, grid, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Isoperimetric,
    Santalo,
    Cyclic,
    Mahler,
    Minkowski,
    Bracket,
}

impl Inequality {
    pub fn name(self) -> &'static str {
        match self {
            Inequality::Isoperimetric => "isoperimetric",
            Inequality::Santalo => "santalo",
            Inequality::Cyclic => "cyclic",
            Inequality::Mahler => "mahler",
            Inequality::Minkowski => "minkowski",
            Inequality::Bracket => "bracket",
        }
    }
}

impl FromStr for Inequality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "isoperimetric" => Inequality::Isoperimetric,
            "santalo" => Inequality::Santalo,
            "cyclic" => Inequality::Cyclic,
            "mahler" => Inequality::Mahler,
            "minkowski" => Inequality::Minkowski,
            "bracket" => Inequality::Bracket,
            other => return Err(Error::InvalidInput(format!("unknown inequality '{other}'"))),
        })
    }
}

/// Inputs of a certificate. `l` is needed by `minkowski` and `bracket`,
/// `psi` by `cyclic`.
#[derive(Clone, Debug)]
pub struct CertifyInputs<'a> {
    pub k: &'a Body,
    pub phi: &'a OrliczFn,
    pub psi: Option<&'a OrliczFn>,
    pub l: Option<&'a Body>,
    pub opts: PettyOptions,
    /// Relative tolerance; the absolute one is this times `max(|lhs|, |rhs|)`.
    pub rel_tol: f64,
}

impl<'a> CertifyInputs<'a> {
    pub fn new(k: &'a Body, phi: &'a OrliczFn) -> Self {
        Self {
            k,
            phi,
            psi: None,
            l: None,
            opts: PettyOptions::default(),
            rel_tol: 1e-6,
        }
    }
}

/// A checked comparison `lhs ≤ rhs`; `holds` iff `slack ≥ −tol`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub id: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub holds: bool,
    /// Each hypothesis with the outcome of its check.
    pub hypotheses: Vec<(String, bool)>,
    pub details: Value,
    /// SHA-256 of the canonical JSON of all inputs.
    pub inputs_digest: String,
}

fn digest(which: Inequality, inp: &CertifyInputs) -> String {
    let canon = json!({
        "which": which.name(),
        "K": body_to_json(inp.k),
        "L": inp.l.map(body_to_json),
        "phi": inp.phi.spec(),
        "psi": inp.psi.map(|p| p.spec()),
        "starts": inp.opts.starts,
        "max_iter": inp.opts.max_iter,
        "tol": inp.opts.tol,
        "seed": inp.opts.seed,
        "rel_tol": inp.rel_tol,
    });
    hex::encode(Sha256::digest(canon.to_string().as_bytes()))
}

fn require(hyps: &[(String, bool)]) -> Result<()> {
    let failed: Vec<&str> = hyps.iter().filter(|(_, ok)| !ok).map(|(h, _)| h.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesesNotSatisfied(failed.join("; ")))
    }
}

fn in_phi_hat(phi: &OrliczFn) -> bool {
    matches!(phi.subclass(), Subclass::PhiHat1 | Subclass::PhiHat2)
}

fn centered(k: &Body) -> Result<Body> {
    let c = k.centroid()?;
    k.translate(&(-c))
}

fn hom_geominimal(k: &Body, phi: &OrliczFn, opts: &PettyOptions) -> Result<PettyResult> {
    solve_petty(k, phi, Mode::Homogeneous, Cone::Full, opts)
}

/// Builds the certificate for one inequality. Fails with
/// `HypothesesNotSatisfied` when a precondition check fails.
pub fn certify(which: Inequality, inp: &CertifyInputs) -> Result<Certificate> {
    let k = inp.k;
    let phi = inp.phi;
    let n = k.dim();
    let nf = n as f64;
    let omega = unit_ball_volume(n);
    let mut hyps: Vec<(String, bool)> = vec![(format!("dimension {n} matches φ"), phi.dim() == n)];
    let (lhs, rhs, slack, details) = match which {
        Inequality::Isoperimetric | Inequality::Santalo => {
            if phi.subclass() == Subclass::PsiHat {
                return Err(Error::Unsupported(
                    "for Ψ̂ the bound involves an unquantified universal constant; compute the ratio with `functional`".into(),
                ));
            }
            hyps.push(("φ ∈ Φ̂₁ ∪ Φ̂₂".into(), in_phi_hat(phi)));
            require(&hyps)?;
            let kc = centered(k)?;
            hyps.push(("centroid at the origin".into(), kc.centroid()?.norm() <= 1e-9 * kc.inner_outer_radii().1));
            let g_ball = nf * omega;
            let gk = hom_geominimal(&kc, phi, &inp.opts)?;
            if which == Inequality::Isoperimetric {
                let lhs = gk.value / g_ball;
                let rhs = (kc.volume()? / omega).powf((nf - 1.0) / nf);
                (lhs, rhs, rhs - lhs, json!({"geominimal": gk.value, "geominimal_ball": g_ball, "volume": kc.volume()?}))
            } else {
                let polar = kc.polar()?;
                hyps.push(("polar body is convex".into(), polar.is_convex()));
                require(&hyps)?;
                let gp = hom_geominimal(&polar, phi, &inp.opts)?;
                let lhs = gk.value * gp.value / (g_ball * g_ball);
                (lhs, 1.0, 1.0 - lhs, json!({"geominimal": gk.value, "geominimal_polar": gp.value, "geominimal_ball": g_ball}))
            }
        }
        Inequality::Mahler => {
            hyps.push(("φ ∈ Φ̂₁".into(), phi.subclass() == Subclass::PhiHat1));
            hyps.push(("φ convex".into(), phi.tags().phi_convex));
            require(&hyps)?;
            let r = hom_geominimal(k, phi, &inp.opts)?;
            let lhs = r.m.volume()? * r.m.polar_volume()?;
            let rhs = k.volume()? * k.polar_volume()?;
            (lhs, rhs, rhs - lhs, json!({"geominimal": r.value, "petty_volume": r.m.volume()?, "petty_polar_volume": r.m.polar_volume()?}))
        }
        Inequality::Cyclic => {
            let psi = inp
                .psi
                .ok_or_else(|| Error::InvalidInput("cyclic certificate needs ψ".into()))?;
            let (cond, ok) = cyclic_condition(phi, psi)?;
            hyps.push((format!("cyclic condition {cond}"), ok));
            require(&hyps)?;
            let a = hom_geominimal(k, phi, &inp.opts)?;
            let b = hom_geominimal(k, psi, &inp.opts)?;
            (a.value, b.value, b.value - a.value, json!({"condition": cond, "phi_verdict": a.verdict, "psi_verdict": b.verdict}))
        }
        Inequality::Minkowski => {
            let l = inp
                .l
                .ok_or_else(|| Error::InvalidInput("minkowski certificate needs L".into()))?;
            hyps.push(("φ increasing".into(), phi.is_increasing()));
            hyps.push(("φ convex".into(), phi.tags().phi_convex));
            require(&hyps)?;
            let v = hom_mixed_volume(k, l, phi)?;
            let lhs = nf * k.volume()?.powf((nf - 1.0) / nf) * l.volume()?.powf(1.0 / nf);
            (lhs, v.value, v.value - lhs, json!({"residual": v.residual}))
        }
        Inequality::Bracket => {
            let l = inp
                .l
                .ok_or_else(|| Error::InvalidInput("bracket certificate needs L".into()))?;
            hyps.push(("φ monotone".into(), phi.is_increasing() || phi.is_decreasing()));
            require(&hyps)?;
            let (r_l, big_r_l) = l.inner_outer_radii();
            let (lo, hi) = radius_bracket(k, r_l, big_r_l);
            let v = hom_mixed_volume(k, l, phi)?.value;
            // two-sided: the slack is the distance to the nearer end
            (v, hi, (v - lo).min(hi - v), json!({"lower": lo, "upper": hi}))
        }
    };
    require(&hyps)?;
    let tol = inp.rel_tol * lhs.abs().max(rhs.abs());
    Ok(Certificate {
        id: which,
        lhs,
        rhs,
        slack,
        tol,
        holds: slack >= -tol,
        hypotheses: hyps,
        details,
        inputs_digest: digest(which, inp),
    })
}

/// Which of the four cyclic conditions applies to `(φ, ψ)`, with
/// `H = φ∘ψ⁻¹` classified numerically.
pub fn cyclic_condition(phi: &OrliczFn, psi: &OrliczFn) -> Result<(&'static str, bool)> {
    use Subclass::*;
    let (a, b) = (phi.subclass(), psi.subclass());
    if matches!(a, PhiHat1 | PhiHat2) && b == PsiHat {
        return Ok(("a", true));
    }
    let h = |t: f64| match psi.inverse(t) {
        Ok(x) => phi.eval(x),
        Err(_) => f64::NAN,
    };
    let tags = classify_fn(&h, phi.dim())?;
    Ok(match (a, b) {
        (PhiHat2, PhiHat1) => ("b", tags.phi_convex),
        (PhiHat1, PhiHat1) => ("c", tags.phi_concave),
        (PhiHat2, PhiHat2) | (PsiHat, PsiHat) => ("d", tags.phi_convex),
        _ => ("none", false),
    })
}

/// A parameter column with one or more value columns.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub parameter: String,
    pub values: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
    pub reference: Option<f64>,
    pub verdict: bool,
    pub verdict_detail: String,
}

impl ProbeReport {
    /// CSV with a header naming the parameter and value columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = std::iter::once(self.parameter.as_str())
            .chain(self.columns.iter().map(|(n, _)| n.as_str()))
            .collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for (i, p) in self.values.iter().enumerate() {
            let _ = write!(out, "{}", fmt_num(*p));
            for (_, col) in &self.columns {
                let _ = write!(out, ",{}", fmt_num(col[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }
}

/// Shortest representation that round-trips.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        x.to_string()
    }
}

/// Body sequences for the continuity probe.
#[derive(Clone, Debug)]
pub enum Family {
    /// Regular polygons with unit circumradius converging to the unit ball.
    RegularPolygons(Vec<usize>),
    /// The same body repeated.
    Constant(Body, usize),
    /// Vertices of `base` moved by `δ` along fixed seeded random directions.
    Perturbed { base: Body, deltas: Vec<f64>, seed: u64 },
}

/// Tabulates `(parameter, d_H(K_i, K), Ĝ(K_i), |Ĝ(K_i) − Ĝ(K)|)`. The verdict
/// requires the last column to be nonincreasing and its final entry to be at
/// most `tol`.
pub fn probe_continuity(family: &Family, phi: &OrliczFn, opts: &PettyOptions, tol: f64) -> Result<ProbeReport> {
    if phi.subclass() != Subclass::PhiHat1 {
        return Err(Error::HypothesesNotSatisfied(format!("{} is not in Φ̂₁", phi.spec())));
    }
    let (param_name, params, bodies, limit, reference): (&str, Vec<f64>, Vec<Body>, Body, Option<f64>) = match family {
        Family::RegularPolygons(ms) => {
            let bodies = ms.iter().map(|&m| Body::regular_polygon(m, 1.0)).collect::<Result<Vec<_>>>()?;
            let n = 2;
            (
                "m",
                ms.iter().map(|&m| m as f64).collect(),
                bodies,
                Body::ball(n, 1.0)?,
                Some(n as f64 * unit_ball_volume(n)),
            )
        }
        Family::Constant(k, count) => ("index", (0..*count).map(|i| i as f64).collect(), vec![k.clone(); *count], k.clone(), None),
        Family::Perturbed { base, deltas, seed } => {
            let poly = base
                .as_polygon()
                .ok_or_else(|| Error::InvalidInput("perturbation family needs a polygon".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let angles: Vec<f64> = poly.vertices().iter().map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            // one direction per vertex, shared by every δ
            let bodies = deltas
                .iter()
                .map(|&d| {
                    let v: Vec<[f64; 2]> = poly
                        .vertices()
                        .iter()
                        .zip(&angles)
                        .map(|(p, t)| [p.x + d * t.cos(), p.y + d * t.sin()])
                        .collect();
                    Body::polygon(&v)
                })
                .collect::<Result<Vec<_>>>()?;
            ("delta", deltas.clone(), bodies, base.clone(), None)
        }
    };
    let reference = match reference {
        Some(r) => r,
        None => solve_petty(&limit, phi, Mode::Homogeneous, Cone::Full, opts)?.value,
    };
    let rows: Vec<(f64, f64)> = bodies
        .par_iter()
        .map(|b| {
            let g = solve_petty(b, phi, Mode::Homogeneous, Cone::Full, opts)?.value;
            Ok((hausdorff_distance(b, &limit)?, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let dist: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let vals: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let err: Vec<f64> = vals.iter().map(|v| (v - reference).abs()).collect();
    let monotone = err.windows(2).all(|w| w[1] <= w[0]);
    let last = err.last().copied().unwrap_or(0.0);
    let verdict = monotone && last <= tol;
    Ok(ProbeReport {
        probe: "continuity".into(),
        parameter: param_name.into(),
        values: params,
        columns: vec![
            ("hausdorff".into(), dist),
            ("geominimal".into(), vals),
            ("abs_error".into(), err),
        ],
        reference: Some(reference),
        verdict,
        verdict_detail: format!("error nonincreasing: {monotone}; final error {last:e} vs tolerance {tol:e}"),
    })
}

/// Default degeneracy schedule `ε = 2^{-k}`, `k = 0..=8`.
pub fn degeneracy_schedule() -> Vec<f64> {
    (0..=8).map(|k| 0.5f64.powi(k)).collect()
}

/// Feasible values along `L_ε = diag(ε, 1/ε)·K`, normalized so `|L_ε°| = ω_n`.
/// The verdict asks the homogeneous column to decrease below `1e-3` times its
/// first entry and the nonhomogeneous one to increase above `1e3` times.
pub fn probe_degeneracy(k: &Body, phi: &OrliczFn, eps: &[f64]) -> Result<ProbeReport> {
    if k.dim() != 2 || k.as_polygon().is_none() {
        return Err(Error::InvalidInput("degeneracy probe needs a planar polytope".into()));
    }
    if phi.subclass() != Subclass::PhiHat2 {
        return Err(Error::HypothesesNotSatisfied(format!("{} is not in Φ̂₂", phi.spec())));
    }
    let hom: Vec<f64> = diagonal_family(k, phi, Mode::Homogeneous, eps, false)?.into_iter().map(|r| r.1).collect();
    let nonhom: Vec<f64> = diagonal_family(k, phi, Mode::Nonhomogeneous, eps, false)?.into_iter().map(|r| r.1).collect();
    let hom_dec = hom.windows(2).all(|w| w[1] < w[0]);
    let nonhom_inc = nonhom.windows(2).all(|w| w[1] > w[0]);
    let hom_ratio = hom.last().unwrap_or(&1.0) / hom.first().unwrap_or(&1.0);
    let nonhom_ratio = nonhom.last().unwrap_or(&1.0) / nonhom.first().unwrap_or(&1.0);
    let verdict = hom_dec && nonhom_inc && hom_ratio < 1e-3 && nonhom_ratio > 1e3;
    Ok(ProbeReport {
        probe: "degeneracy".into(),
        parameter: "epsilon".into(),
        values: eps.to_vec(),
        columns: vec![("hom".into(), hom), ("nonhom".into(), nonhom)],
        reference: None,
        verdict,
        verdict_detail: format!(
            "hom decreasing: {hom_dec}, final ratio {hom_ratio:e} (needs < 1e-3); \
             nonhom increasing: {nonhom_inc}, final ratio {nonhom_ratio:e} (needs > 1e3)"
        ),
    })
}

/// Shells per singular end in the planar projection integral.
pub const CNP_LEVELS: usize = 45;

/// `∫_{S^{n-1}} |⟨u, v⟩|^p dσ(u)` for one direction `v`.
///
/// In the plane the circle is cut at the two angles orthogonal to `v` and at
/// the two angles of `±v`; each quarter is integrated toward its singular end
/// with the inner product evaluated from the actual node `u`.
pub fn projection_integral(p: f64, v: &Dir, n: usize) -> Result<f64> {
    if !(p > -1.0 && p < 0.0) {
        return Err(Error::InvalidInput(format!("p = {p} is outside (-1, 0)")));
    }
    match n {
        2 => {
            let tv = v.y.atan2(v.x);
            let mut total = 0.0;
            for s in [tv + 0.5 * PI, tv + 1.5 * PI] {
                for dir in [1.0, -1.0] {
                    let r = graded_toward_zero(
                        |x| {
                            let t = s + dir * x;
                            (t.cos() * v.x + t.sin() * v.y).abs().powf(p)
                        },
                        0.5 * PI,
                        CNP_LEVELS,
                    );
                    if !r.converged {
                        return Err(Error::ConditionViolated(format!("projection integral diverges for p = {p}")));
                    }
                    total += r.value;
                }
            }
            Ok(total)
        }
        3 => {
            // rotation invariance: 2π ∫_{-1}^{1} |z|^p dz
            let r = graded_toward_zero(|z| z.powf(p), 1.0, CNP_LEVELS);
            Ok(4.0 * PI * r.value)
        }
        _ => Err(Error::UnsupportedDimension(n, "2 or 3")),
    }
}

/// Evaluates the projection integral for `trials` seeded random directions
/// and reports the mean and the relative spread `(max − min)/mean`.
pub fn cnp_constant(p: f64, grid: &SphereGrid, trials: usize, seed: u64) -> Result<ProbeReport> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidInput(format!("grid {} is not symmetric", grid.spec())));
    }
    let n = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Dir> = (0..trials)
        .map(|_| match n {
            2 => {
                let t: f64 = rng.random_range(0.0..2.0 * PI);
                Dir::new(t.cos(), t.sin(), 0.0)
            }
            _ => loop {
                let v = Dir::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                let r = v.norm();
                if r > 1e-3 && r <= 1.0 {
                    break v / r;
                }
            },
        })
        .collect();
    let vals = dirs.iter().map(|v| projection_integral(p, v, n)).collect::<Result<Vec<_>>>()?;
    let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = if vals.is_empty() { 0.0 } else { (max - min) / mean };
    let angle: Vec<f64> = dirs.iter().map(|v| v.y.atan2(v.x)).collect();
    Ok(ProbeReport {
        probe: "cnp".into(),
        parameter: "trial".into(),
        values: (0..trials).map(|i| i as f64).collect(),
        columns: vec![("azimuth".into(), angle), ("value".into(), vals)],
        reference: Some(mean),
        verdict: spread <= 1e-6,
        verdict_detail: format!("mean {mean:?}, relative spread {spread:e}, sphere area {:?}", sphere_area(n)),
    })
}
