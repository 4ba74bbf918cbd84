//! Orlicz functions φ: (0, ∞) → (0, ∞) with φ(1) = 1, their classes and the
//! integrability condition used on symmetric bodies.
//!
//! With `F(t) = φ(t^{-1/n})` the classes are
//! `Φ̂₁` (increasing, F strictly convex), `Φ̂₂` (decreasing, F strictly
//! concave) and `Ψ̂` (decreasing, F strictly convex).

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::graded_toward_zero;
use crate::roots::bisect;
use crate::sphere::{check_dim, SphereGrid};

/// Points of the log-spaced classification grid on [1e−6, 1e6].
pub const CLASSIFY_POINTS: usize = 512;
pub const CLASSIFY_RANGE: (f64, f64) = (1e-6, 1e6);
/// Relative margin for strict convexity and monotonicity verdicts.
pub const CLASSIFY_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subclass {
    #[serde(rename = "Phi1")]
    PhiHat1,
    #[serde(rename = "Phi2")]
    PhiHat2,
    #[serde(rename = "Psi")]
    PsiHat,
    /// Monotone but F neither strictly convex nor strictly concave.
    None,
}

/// Class verdicts for a φ in a given dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassTags {
    pub dim: usize,
    pub monotonicity: Monotonicity,
    pub subclass: Subclass,
    pub phi_convex: bool,
    pub phi_concave: bool,
    pub f_strictly_convex: bool,
    pub f_strictly_concave: bool,
    /// Verdicts come from grid samples rather than a closed form.
    pub numeric: bool,
    /// Grid points dropped because φ or F overflowed there.
    pub truncated_points: usize,
    /// `pow:-n`, where F is linear and no subclass applies.
    pub boundary_case: bool,
}

impl ClassTags {
    pub fn is_increasing(&self) -> bool {
        self.monotonicity == Monotonicity::Increasing
    }

    pub fn is_decreasing(&self) -> bool {
        self.monotonicity == Monotonicity::Decreasing
    }

    /// Short labels such as `I`, `Phi1`, `convex`.
    pub fn labels(&self) -> Vec<&'static str> {
        let mut v = vec![if self.is_increasing() { "I" } else { "D" }];
        match self.subclass {
            Subclass::PhiHat1 => v.push("Phi1"),
            Subclass::PhiHat2 => v.push("Phi2"),
            Subclass::PsiHat => v.push("Psi"),
            Subclass::None => {}
        }
        match (self.phi_convex, self.phi_concave) {
            (true, true) => v.push("linear"),
            (true, false) => v.push("convex"),
            (false, true) => v.push("concave"),
            _ => {}
        }
        if self.boundary_case {
            v.push("boundary");
        }
        if self.numeric {
            v.push("numeric");
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Power(f64),
    Expm1,
    /// Piecewise log-linear table: `ln φ` linear in `ln t` between knots,
    /// extended by the end slopes.
    Table {
        source: String,
        log_t: Arc<Vec<f64>>,
        log_v: Arc<Vec<f64>>,
    },
}

/// A normalized Orlicz function with class tags for dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrliczFn {
    kind: Kind,
    tags: ClassTags,
}

impl fmt::Display for OrliczFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

const E_MINUS_1: f64 = std::f64::consts::E - 1.0;

fn power_tags(p: f64, n: usize) -> ClassTags {
    let nf = n as f64;
    let boundary = p == -nf;
    // F(t) = t^{-p/n}
    let a = -p / nf;
    let f_convex = a * (a - 1.0) > 0.0;
    let f_concave = a * (a - 1.0) < 0.0;
    let monotonicity = if p > 0.0 {
        Monotonicity::Increasing
    } else {
        Monotonicity::Decreasing
    };
    let subclass = match (monotonicity, f_convex, f_concave) {
        (Monotonicity::Increasing, true, _) => Subclass::PhiHat1,
        (Monotonicity::Decreasing, _, true) => Subclass::PhiHat2,
        (Monotonicity::Decreasing, true, _) => Subclass::PsiHat,
        _ => Subclass::None,
    };
    ClassTags {
        dim: n,
        monotonicity,
        subclass,
        phi_convex: p >= 1.0 || p < 0.0,
        phi_concave: (0.0..=1.0).contains(&p),
        f_strictly_convex: f_convex,
        f_strictly_concave: f_concave,
        numeric: false,
        truncated_points: 0,
        boundary_case: boundary,
    }
}

/// Log-spaced check grid.
fn check_grid() -> Vec<f64> {
    let (a, b) = (CLASSIFY_RANGE.0.ln(), CLASSIFY_RANGE.1.ln());
    (0..CLASSIFY_POINTS)
        .map(|k| (a + (b - a) * k as f64 / (CLASSIFY_POINTS - 1) as f64).exp())
        .collect()
}

/// Sign of the second divided differences of `g` on consecutive triples:
/// `(all ≥ −margin, all ≤ margin, all > margin, all < −margin)`, each
/// relative to the local function scale.
fn curvature_signs(t: &[f64], v: &[f64]) -> (bool, bool, bool, bool) {
    let (mut cvx, mut ccv, mut scvx, mut sccv) = (true, true, true, true);
    for i in 1..t.len() - 1 {
        let (t0, t1, t2) = (t[i - 1], t[i], t[i + 1]);
        // normalize first so huge values cannot overflow the differences
        let s = v[i - 1].abs() + v[i].abs() + v[i + 1].abs();
        let (v0, v1, v2) = (v[i - 1] / s, v[i] / s, v[i + 1] / s);
        let r = ((v2 - v1) / (t2 - t1) - (v1 - v0) / (t1 - t0)) * (t2 - t0);
        let thr = CLASSIFY_MARGIN;
        cvx &= r >= -thr;
        ccv &= r <= thr;
        scvx &= r > thr;
        sccv &= r < -thr;
    }
    (cvx, ccv, scvx, sccv)
}

/// Numeric class verdicts for an arbitrary `φ` in dimension `n`.
///
/// Points where `φ` or `F` is not finite are dropped (counted in
/// `truncated_points`); an evaluation that yields NaN, a nonpositive value
/// or too few usable points is an error.
pub fn classify_fn(phi: &dyn Fn(f64) -> f64, n: usize) -> Result<ClassTags> {
    check_dim(n)?;
    let grid = check_grid();
    let mut truncated = 0;
    let mut sample = |g: &dyn Fn(f64) -> f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let mut ts = Vec::with_capacity(grid.len());
        let mut vs = Vec::with_capacity(grid.len());
        for &t in &grid {
            let v = g(t);
            if v.is_nan() || v <= 0.0 {
                return Err(Error::NotClassifiable(format!("φ evaluates to {v} at t = {t:e}")));
            }
            if v.is_finite() {
                ts.push(t);
                vs.push(v);
            } else {
                truncated += 1;
            }
        }
        if ts.len() < CLASSIFY_POINTS / 2 {
            return Err(Error::NotClassifiable(format!(
                "only {} of {} grid points are finite",
                ts.len(),
                CLASSIFY_POINTS
            )));
        }
        Ok((ts, vs))
    };
    let (t, v) = sample(phi)?;
    let nf = n as f64;
    let (ft, fv) = sample(&|t: f64| phi(t.powf(-1.0 / nf)))?;

    let inc = v.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-15));
    let dec = v.windows(2).all(|w| w[1] < w[0] * (1.0 - 1e-15));
    let monotonicity = match (inc, dec) {
        (true, _) => Monotonicity::Increasing,
        (_, true) => Monotonicity::Decreasing,
        _ => {
            return Err(Error::NotClassifiable(
                "φ is not strictly monotone on the check grid".into(),
            ))
        }
    };
    let (phi_convex, phi_concave, _, _) = curvature_signs(&t, &v);
    let (_, _, f_scvx, f_sccv) = curvature_signs(&ft, &fv);
    let subclass = match (monotonicity, f_scvx, f_sccv) {
        (Monotonicity::Increasing, true, _) => Subclass::PhiHat1,
        (Monotonicity::Decreasing, _, true) => Subclass::PhiHat2,
        (Monotonicity::Decreasing, true, _) => Subclass::PsiHat,
        _ => Subclass::None,
    };
    Ok(ClassTags {
        dim: n,
        monotonicity,
        subclass,
        phi_convex,
        phi_concave,
        f_strictly_convex: f_scvx,
        f_strictly_concave: f_sccv,
        numeric: true,
        truncated_points: truncated,
        boundary_case: false,
    })
}

impl OrliczFn {
    /// `φ(t) = t^p`, tagged analytically.
    pub fn power_law(p: f64, n: usize) -> Result<Self> {
        check_dim(n)?;
        if p == 0.0 || !p.is_finite() {
            return Err(Error::InvalidPhi(format!("power law needs a finite p ≠ 0, got {p}")));
        }
        Ok(Self {
            kind: Kind::Power(p),
            tags: power_tags(p, n),
        })
    }

    /// `φ(t) = (e^t − 1)/(e − 1)`, tagged numerically.
    pub fn expm1(n: usize) -> Result<Self> {
        let kind = Kind::Expm1;
        let tags = classify_fn(&|t| t.exp_m1() / E_MINUS_1, n)?;
        Ok(Self { kind, tags })
    }

    /// A strictly monotone table of `(t, φ(t))` pairs with `t` increasing and
    /// `φ(1) = 1`, interpolated log-linearly.
    pub fn table(source: &str, points: &[(f64, f64)], n: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPhi("table needs at least two points".into()));
        }
        if points.iter().any(|(t, v)| !(*t > 0.0 && *v > 0.0 && t.is_finite() && v.is_finite())) {
            return Err(Error::InvalidPhi("table entries must be positive and finite".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidPhi("table abscissae must increase".into()));
        }
        let inc = points.windows(2).all(|w| w[1].1 > w[0].1);
        let dec = points.windows(2).all(|w| w[1].1 < w[0].1);
        if !inc && !dec {
            return Err(Error::InvalidPhi("table values must be strictly monotone".into()));
        }
        let kind = Kind::Table {
            source: source.to_string(),
            log_t: Arc::new(points.iter().map(|p| p.0.ln()).collect()),
            log_v: Arc::new(points.iter().map(|p| p.1.ln()).collect()),
        };
        let probe = Self {
            kind: kind.clone(),
            tags: power_tags(1.0, n),
        };
        let one = probe.eval(1.0);
        if (one - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPhi(format!("table gives φ(1) = {one}, expected 1")));
        }
        let tags = classify_fn(&|t| probe.eval(t), n)?;
        Ok(Self { kind, tags })
    }

    /// Reads a table file: one `t value` pair per line, `#` comments.
    pub fn table_file(path: &Path, n: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidPhi(format!("cannot read {}: {e}", path.display())))?;
        let mut pts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<f64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidPhi(format!("line {}: {e}", i + 1)))?;
            if nums.len() != 2 {
                return Err(Error::InvalidPhi(format!("line {}: expected two numbers", i + 1)));
            }
            pts.push((nums[0], nums[1]));
        }
        Self::table(&path.display().to_string(), &pts, n)
    }

    /// Parses `pow:<p>`, `expm1` or `table:<path>`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        if let Some(p) = spec.strip_prefix("pow:") {
            let p = parse_real(p).ok_or_else(|| Error::InvalidPhi(format!("bad exponent in '{spec}'")))?;
            return Self::power_law(p, n);
        }
        if spec == "expm1" {
            return Self::expm1(n);
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Self::table_file(Path::new(path), n);
        }
        Err(Error::InvalidPhi(format!(
            "unknown φ spec '{spec}' (expected pow:<p>, expm1 or table:<path>)"
        )))
    }

    /// The same function tagged for another dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        match &self.kind {
            Kind::Power(p) => Self::power_law(*p, n),
            _ => {
                let tags = classify_fn(&|t| self.eval(t), n)?;
                Ok(Self {
                    kind: self.kind.clone(),
                    tags,
                })
            }
        }
    }

    pub fn spec(&self) -> String {
        match &self.kind {
            Kind::Power(p) => format!("pow:{p}"),
            Kind::Expm1 => "expm1".to_string(),
            Kind::Table { source, .. } => format!("table:{source}"),
        }
    }

    pub fn tags(&self) -> &ClassTags {
        &self.tags
    }

    pub fn dim(&self) -> usize {
        self.tags.dim
    }

    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            Kind::Power(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_increasing(&self) -> bool {
        self.tags.is_increasing()
    }

    pub fn is_decreasing(&self) -> bool {
        self.tags.is_decreasing()
    }

    pub fn subclass(&self) -> Subclass {
        self.tags.subclass
    }

    /// φ(t) for t > 0. Overflow yields +∞.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(p) => {
                if *p == 1.0 {
                    t
                } else if *p == 2.0 {
                    t * t
                } else if *p == -1.0 {
                    1.0 / t
                } else {
                    t.powf(*p)
                }
            }
            Kind::Expm1 => t.exp_m1() / E_MINUS_1,
            Kind::Table { log_t, log_v, .. } => {
                let x = t.ln();
                let k = segment(log_t, x);
                let slope = (log_v[k + 1] - log_v[k]) / (log_t[k + 1] - log_t[k]);
                (log_v[k] + slope * (x - log_t[k])).exp()
            }
        }
    }

    /// φ(t) for t ≥ 0 with the class convention at 0: increasing functions
    /// vanish there, decreasing ones are undefined.
    pub fn eval_nonneg(&self, t: f64) -> Result<f64> {
        if t > 0.0 {
            Ok(self.eval(t))
        } else if self.is_increasing() {
            Ok(0.0)
        } else {
            Err(Error::PhiUndefinedAtZero)
        }
    }

    /// φ′(t) for t > 0 (right derivative at table knots).
    pub fn derivative(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(p) => p * t.powf(p - 1.0),
            Kind::Expm1 => t.exp() / E_MINUS_1,
            Kind::Table { log_t, log_v, .. } => {
                let x = t.ln();
                let k = segment(log_t, x);
                let slope = (log_v[k + 1] - log_v[k]) / (log_t[k + 1] - log_t[k]);
                slope * self.eval(t) / t
            }
        }
    }

    /// One-sided derivatives `(φ′_l(1), φ′_r(1))`.
    pub fn derivatives_at_one(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Table { log_t, log_v, .. } => {
                let slope = |k: usize| (log_v[k + 1] - log_v[k]) / (log_t[k + 1] - log_t[k]);
                let right = segment(log_t, 0.0);
                let left = match log_t.iter().position(|x| *x == 0.0) {
                    Some(k) if k > 0 => k - 1,
                    _ => right,
                };
                (slope(left), slope(right))
            }
            _ => {
                let d = self.derivative(1.0);
                (d, d)
            }
        }
    }

    /// `φ⁻¹(y)` for y > 0.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if let Kind::Power(p) = self.kind {
            return Ok(y.powf(1.0 / p));
        }
        // bracket in log t, then bisect
        let g = |s: f64| {
            let v = self.eval(s.exp());
            if self.is_increasing() {
                v.ln() - y.ln()
            } else {
                y.ln() - v.ln()
            }
        };
        let (mut lo, mut hi) = (-1.0, 1.0);
        let mut k = 0;
        while g(lo) > 0.0 || g(hi) < 0.0 {
            lo *= 2.0;
            hi *= 2.0;
            k += 1;
            if k > 12 {
                return Err(Error::RootNotBracketed(format!("φ⁻¹({y:e})")));
            }
        }
        Ok(bisect(g, lo, hi, 200)?.x.exp())
    }
}

/// Index `k` of the table segment used at `x` (end segments extend).
fn segment(knots: &[f64], x: f64) -> usize {
    let last = knots.len() - 2;
    match knots.partition_point(|k| *k <= x) {
        0 => 0,
        i => (i - 1).min(last),
    }
}

/// Parses a real, accepting simple fractions such as `-1/2`.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0.0).then(|| a / b);
    }
    s.parse().ok()
}

/// Numeric class verdicts of `phi` in dimension `n`, regardless of any
/// closed-form tags it carries.
pub fn classify(phi: &OrliczFn, n: usize) -> Result<ClassTags> {
    classify_fn(&|t| phi.eval(t), n)
}

/// `∫_{S^{n-1}} g(|⟨u, e₁⟩|) dσ(u)` reduced by rotation invariance to one
/// variable and integrated on shells toward the great circle where the
/// argument vanishes.
pub fn sphere_integral_of_abs_inner<G: Fn(f64) -> f64>(g: G, n: usize, levels: usize) -> Result<crate::quad::GradedIntegral> {
    match n {
        // 4 ∫_0^{π/2} g(sin x) dx
        2 => {
            let mut r = graded_toward_zero(|x| g(x.sin()), std::f64::consts::FRAC_PI_2, levels);
            r.shells.iter_mut().for_each(|s| *s *= 4.0);
            r.tail *= 4.0;
            r.value *= 4.0;
            Ok(r)
        }
        // 4π ∫_0^1 g(z) dz
        3 => {
            let c = 4.0 * std::f64::consts::PI;
            let mut r = graded_toward_zero(&g, 1.0, levels);
            r.shells.iter_mut().for_each(|s| *s *= c);
            r.tail *= c;
            r.value *= c;
            Ok(r)
        }
        _ => Err(Error::UnsupportedDimension(n, "2 or 3")),
    }
}

/// Shell count used by the integrability check.
pub const INTEGRABILITY_LEVELS: usize = 48;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    /// All values finite and strictly decreasing in the scale.
    pub satisfied: bool,
}

/// Evaluates `I(s) = ∫ φ(s |⟨u, e₁⟩|) dσ(u)` for each scale.
pub fn check_symmetric_integrability(phi: &OrliczFn, grid: &SphereGrid, scales: &[f64]) -> Result<IntegrabilityReport> {
    if !phi.is_decreasing() {
        return Err(Error::InvalidPhi(format!("{} is not decreasing", phi.spec())));
    }
    if !grid.is_symmetric() {
        return Err(Error::InvalidInput(format!("grid {} is not symmetric", grid.spec())));
    }
    let n = grid.dim();
    let mut values = Vec::with_capacity(scales.len());
    for &s in scales {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!("scale {s} is not positive")));
        }
        let r = sphere_integral_of_abs_inner(|x| phi.eval(s * x), n, INTEGRABILITY_LEVELS)?;
        if !r.converged || !r.value.is_finite() {
            return Err(Error::ConditionViolated(format!(
                "∫ φ({s}·|⟨u,e₁⟩|) dσ diverges: shell ratio {:.4} does not decay",
                r.ratio
            )));
        }
        values.push(r.value);
    }
    let satisfied = values.windows(2).all(|w| w[1] < w[0]);
    Ok(IntegrabilityReport {
        scales: scales.to_vec(),
        values,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_tags() {
        let t = OrliczFn::power_law(2.0, 2).unwrap();
        assert_eq!(t.tags().labels(), vec!["I", "Phi1", "convex"]);
        assert_eq!(t.derivatives_at_one(), (2.0, 2.0));
        assert_eq!(OrliczFn::power_law(-0.5, 2).unwrap().subclass(), Subclass::PhiHat2);
        assert_eq!(OrliczFn::power_law(-3.0, 2).unwrap().subclass(), Subclass::PsiHat);
        let b = OrliczFn::power_law(-2.0, 2).unwrap();
        assert!(b.tags().boundary_case && b.subclass() == Subclass::None);
        assert!(OrliczFn::power_law(0.0, 2).is_err());
    }

    #[test]
    fn numeric_classification_matches_closed_forms() {
        for p in [-5.0, -3.0, -1.5, -0.5, 0.25, 0.5, 1.0, 2.0, 3.0] {
            for n in [2, 3] {
                let phi = OrliczFn::power_law(p, n).unwrap();
                let num = classify(&phi, n).unwrap();
                assert_eq!(num.monotonicity, phi.tags().monotonicity, "p={p}");
                assert_eq!(num.subclass, phi.tags().subclass, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn expm1_is_convex_phi1() {
        let phi = OrliczFn::expm1(2).unwrap();
        assert_eq!(phi.eval(1.0), 1.0);
        let tags = phi.tags();
        assert_eq!(tags.subclass, Subclass::PhiHat1);
        assert!(tags.phi_convex && !tags.phi_concave);
        assert!(tags.truncated_points > 0);
    }

    #[test]
    fn sqrt_is_concave_phi1() {
        let tags = classify(&OrliczFn::power_law(0.5, 2).unwrap(), 2).unwrap();
        assert_eq!(tags.subclass, Subclass::PhiHat1);
        assert!(tags.phi_concave && !tags.phi_convex);
    }

    #[test]
    fn table_interpolates_power_law() {
        let pts: Vec<(f64, f64)> = (-6..=6).map(|k| {
            let t = 2f64.powi(k);
            (t, t * t)
        }).collect();
        let phi = OrliczFn::table("sq", &pts, 2).unwrap();
        assert!((phi.eval(3.0) - 9.0).abs() < 1e-12);
        assert_eq!(phi.derivatives_at_one(), (2.0, 2.0));
        assert_eq!(phi.subclass(), Subclass::PhiHat1);
        assert!((phi.inverse(9.0).unwrap() - 3.0).abs() < 1e-12);
        let bad = [(0.5, 2.0), (1.0, 1.5)];
        assert!(OrliczFn::table("bad", &bad, 2).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(OrliczFn::parse("pow:-1/2", 2).unwrap().power_exponent(), Some(-0.5));
        assert_eq!(OrliczFn::parse("expm1", 3).unwrap().spec(), "expm1");
        assert!(matches!(OrliczFn::parse("log", 2), Err(Error::InvalidPhi(_))));
    }

    #[test]
    fn zero_convention() {
        assert_eq!(OrliczFn::power_law(2.0, 2).unwrap().eval_nonneg(0.0), Ok(0.0));
        assert_eq!(
            OrliczFn::power_law(-0.5, 2).unwrap().eval_nonneg(0.0),
            Err(Error::PhiUndefinedAtZero)
        );
    }

    #[test]
    fn integrability() {
        let g = SphereGrid::uniform(64).unwrap();
        let phi = OrliczFn::power_law(-0.5, 2).unwrap();
        let r = check_symmetric_integrability(&phi, &g, &[1.0, 10.0, 100.0]).unwrap();
        assert!(r.satisfied);
        assert!((r.values[1] / r.values[0] - 10f64.powf(-0.5)).abs() < 1e-10);
        let bad = OrliczFn::power_law(-2.0, 2).unwrap();
        assert!(matches!(
            check_symmetric_integrability(&bad, &g, &[1.0]),
            Err(Error::ConditionViolated(_))
        ));
    }
}
