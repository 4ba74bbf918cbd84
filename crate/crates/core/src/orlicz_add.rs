//! Linear Orlicz addition of support functions and the first variation of
//! volume it induces.
//!
//! `f_ε` solves `φ₁(h_K/f) + ε φ₂(h_L/f) = 1` direction by direction; the
//! Aleksandrov body of `f_ε` is `K_ε`. The nonhomogeneous mixed volume
//! `V_φ₂(K, L)` equals `φ₁′(1)/n · lim (|K_ε| − |K|)/ε`, with the left
//! derivative for increasing and the right derivative for decreasing φ.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{aleksandrov_polygon, Body};
use crate::error::{Error, Result};
use crate::mixed_vol::nonhom_mixed_volume;
use crate::orlicz_fn::OrliczFn;
use crate::roots::bisect;
use crate::sphere::{planar, Dir};

/// Uniform directions added to the normals of K when building `K_ε`.
pub const ENRICHMENT: usize = 512;
/// Vertex count of the polygon that stands in for a disk.
pub const DISK_POLYGON: usize = 256;

/// `f_ε` on a direction set.
#[derive(Clone, Debug, Serialize)]
pub struct OrliczSum {
    #[serde(skip)]
    pub directions: Vec<Dir>,
    pub h_k: Vec<f64>,
    pub h_l: Vec<f64>,
    pub f: Vec<f64>,
    pub epsilon: f64,
    /// Largest `|φ₁(h_K/f) + ε φ₂(h_L/f) − 1|`.
    pub max_residual: f64,
}

fn check_pair(phi1: &OrliczFn, phi2: &OrliczFn) -> Result<()> {
    if phi1.is_increasing() != phi2.is_increasing() {
        return Err(Error::MixedMonotonicity);
    }
    Ok(())
}

/// Solves for one direction; the root lies in `[h_k, ∞)` for increasing and
/// in `(0, h_k]` for decreasing φ.
pub fn orlicz_add_scalar(hk: f64, hl: f64, phi1: &OrliczFn, phi2: &OrliczFn, eps: f64) -> Result<(f64, f64)> {
    let lhs = |f: f64| phi1.eval(hk / f) + eps * phi2.eval(hl / f) - 1.0;
    let (lo, hi) = if phi1.is_increasing() {
        let mut hi = 2.0 * hk;
        while lhs(hi) > 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::RootNotBracketed("Orlicz sum upper end".into()));
            }
        }
        (hk, hi)
    } else {
        let mut lo = 0.5 * hk;
        while lhs(lo) > 0.0 {
            lo *= 0.5;
            if lo == 0.0 {
                return Err(Error::RootNotBracketed("Orlicz sum lower end".into()));
            }
        }
        (lo, hk)
    };
    let r = bisect(lhs, lo, hi, 400)?;
    Ok((r.x, r.fx.abs()))
}

/// `f_ε = h_K +_{φ,ε} h_L` on the given directions.
pub fn orlicz_add(k: &Body, l: &Body, phi1: &OrliczFn, phi2: &OrliczFn, eps: f64, directions: &[Dir]) -> Result<OrliczSum> {
    check_pair(phi1, phi2)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("ε = {eps} is not positive")));
    }
    let h_k = directions.iter().map(|u| k.support(u)).collect::<Result<Vec<_>>>()?;
    let h_l = directions.iter().map(|u| l.support(u)).collect::<Result<Vec<_>>>()?;
    let solved = h_k
        .par_iter()
        .zip(h_l.par_iter())
        .map(|(a, b)| orlicz_add_scalar(*a, *b, phi1, phi2, eps))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = solved.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(OrliczSum {
        directions: directions.to_vec(),
        h_k,
        h_l,
        f: solved.into_iter().map(|s| s.0).collect(),
        epsilon: eps,
        max_residual,
    })
}

/// The default schedule `0.1·2^{−k}`, k = 0..7.
pub fn default_schedule() -> Vec<f64> {
    (0..8).map(|k| 0.1 * 0.5f64.powi(k)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationalRow {
    pub epsilon: f64,
    pub volume: f64,
    /// `φ₁′(1) (|K_ε| − |K|) / (n ε)`.
    pub quotient: f64,
    /// `sup |φ₁′(1)(f_ε − h_K)/ε − h_K φ₂(h_L/h_K)|` over the directions.
    pub pointwise_error: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationalEstimate {
    pub rows: Vec<VariationalRow>,
    /// First-order Richardson extrapolation of the last two quotients.
    pub extrapolated: f64,
    /// `V_φ₂(K, L)` by direct summation over the surface measure of K.
    pub direct: f64,
    pub relative_gap: f64,
    pub derivative_at_one: f64,
    /// `||K_ε| − |K_ε'||` at the smallest ε when the enrichment is doubled.
    pub enrichment_drift: f64,
    /// The polygon standing in for K, when K is not a polygon.
    pub polygon_vertices: Option<usize>,
}

fn polygon_of(k: &Body) -> Result<(Body, Option<usize>)> {
    match k {
        Body::Polygon(_) | Body::HPolytope(_) => Ok((k.clone(), None)),
        Body::Ball(b) if b.grid().dim() == 2 => Ok((
            Body::regular_polygon(DISK_POLYGON, b.radius())?,
            Some(DISK_POLYGON),
        )),
        _ => Err(Error::Unsupported(format!(
            "variational estimate needs a planar polygon or disk, got {}",
            k.kind()
        ))),
    }
}

fn enriched_directions(kp: &Body, extra: usize) -> Vec<Dir> {
    let poly = kp.as_polygon().expect("polygon");
    poly.normals()
        .iter()
        .map(|v| Dir::new(v.x, v.y, 0.0))
        .chain((0..extra).map(|j| planar(2.0 * PI * j as f64 / extra as f64)))
        .collect()
}

/// Estimates `V_φ₂(K, L)` from the volumes of the Aleksandrov bodies `K_ε`.
pub fn variational_mixed_volume(k: &Body, l: &Body, phi1: &OrliczFn, phi2: &OrliczFn, schedule: &[f64]) -> Result<VariationalEstimate> {
    check_pair(phi1, phi2)?;
    if k.dim() != 2 || l.dim() != 2 {
        return Err(Error::UnsupportedDimension(k.dim().max(l.dim()), "2"));
    }
    if schedule.len() < 2 || schedule.windows(2).any(|w| !(w[1] < w[0])) || schedule.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidInput("ε schedule must be positive and strictly decreasing, length ≥ 2".into()));
    }
    let (dl, dr) = phi1.derivatives_at_one();
    let d = if phi1.is_increasing() {
        if !(dl > 0.0 && dl.is_finite()) {
            return Err(Error::InterpretationHypothesis(format!("φ₁′_l(1) = {dl} is not positive")));
        }
        dl
    } else {
        if !(dr != 0.0 && dr.is_finite()) {
            return Err(Error::InterpretationHypothesis(format!("φ₁′_r(1) = {dr} is zero or absent")));
        }
        dr
    };
    let (kp, polygon_vertices) = polygon_of(k)?;
    let n = 2.0;
    let vol_k = kp.volume()?;
    let dirs = enriched_directions(&kp, ENRICHMENT);
    let mut rows = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let sum = orlicz_add(&kp, l, phi1, phi2, eps, &dirs)?;
        let (poly, _) = aleksandrov_polygon(&dirs, &sum.f)?;
        let volume = poly.area();
        let pointwise_error = (0..dirs.len())
            .map(|i| {
                let target = sum.h_k[i] * phi2.eval(sum.h_l[i] / sum.h_k[i]);
                (d * (sum.f[i] - sum.h_k[i]) / eps - target).abs()
            })
            .fold(0.0, f64::max);
        rows.push(VariationalRow {
            epsilon: eps,
            volume,
            quotient: d * (volume - vol_k) / (n * eps),
            pointwise_error,
            max_residual: sum.max_residual,
        });
    }
    let m = rows.len();
    let (e1, e0) = (rows[m - 1].epsilon, rows[m - 2].epsilon);
    let (q1, q0) = (rows[m - 1].quotient, rows[m - 2].quotient);
    // Δ(ε) ≈ Δ₀ + aε
    let extrapolated = (q1 * e0 - q0 * e1) / (e0 - e1);

    let dirs2 = enriched_directions(&kp, 2 * ENRICHMENT);
    let sum2 = orlicz_add(&kp, l, phi1, phi2, e1, &dirs2)?;
    let enrichment_drift = (aleksandrov_polygon(&dirs2, &sum2.f)?.0.area() - rows[m - 1].volume).abs();

    let direct = nonhom_mixed_volume(k, l, phi2)?;
    Ok(VariationalEstimate {
        relative_gap: (extrapolated - direct).abs() / direct.abs(),
        rows,
        extrapolated,
        direct,
        derivative_at_one: d,
        enrichment_drift,
        polygon_vertices,
    })
}
