//! One-dimensional Gauss-Legendre quadrature, plain and graded toward an
//! endpoint singularity.

use std::sync::OnceLock;

/// Points per Gauss-Legendre panel.
pub const GL_POINTS: usize = 20;

/// Nodes and weights of the `m`-point rule on [−1, 1] (Newton on P_m).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// `∫_a^b f` with one 20-point panel.
pub fn gl_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(w).map(|(xi, wi)| wi * f(c + r * xi)).sum::<f64>() * r
}

/// `∫_a^b f` with `panels` equal panels.
pub fn gl_composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| gl_panel(&mut f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Result of integrating toward a possible singularity at distance 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedIntegral {
    /// Shell integrals over `[L·2^{-k-1}, L·2^{-k}]`, k = 0, 1, …
    pub shells: Vec<f64>,
    /// Geometric estimate of the remaining mass below the last shell.
    pub tail: f64,
    /// Asymptotic ratio of consecutive shells.
    pub ratio: f64,
    pub value: f64,
    /// False when the shells stop decaying (the integral diverges).
    pub converged: bool,
}

/// `∫_0^L g(x) dx` for `g` possibly singular at `x = 0`, over dyadic shells.
///
/// `g` receives the distance `x` from the singular end, so no precision is
/// lost near it.
pub fn graded_toward_zero<F: FnMut(f64) -> f64>(mut g: F, length: f64, levels: usize) -> GradedIntegral {
    let mut shells = Vec::with_capacity(levels);
    let mut hi = length;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        shells.push(gl_panel(&mut g, lo, hi));
        hi = lo;
    }
    let k = shells.len();
    let ratio = if k >= 2 && shells[k - 2] != 0.0 {
        shells[k - 1] / shells[k - 2]
    } else {
        0.0
    };
    // the integral diverges when late shells do not shrink geometrically
    let late = &shells[k.saturating_sub(8)..];
    let growing = late.windows(2).all(|w| w[1].abs() >= 0.999 * w[0].abs());
    let converged = shells.iter().all(|s| s.is_finite()) && ratio.abs() < 0.999 && !growing;
    let tail = if converged && ratio > 0.0 {
        shells[k - 1] * ratio / (1.0 - ratio)
    } else {
        0.0
    };
    let value = shells.iter().rev().sum::<f64>() + tail;
    GradedIntegral {
        shells,
        tail,
        ratio,
        value,
        converged,
    }
}
