//! Unconstrained minimizers: Nelder-Mead with restarts and L-BFGS.

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Best value after each iteration.
    pub trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop when the spread of simplex values falls below this (absolute).
    pub ftol: f64,
    pub max_evaluations: usize,
    pub max_restarts: usize,
    /// Stop as soon as the best value drops below this.
    pub target: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            ftol: 1e-12,
            max_evaluations: 20_000,
            max_restarts: 6,
            target: f64::NEG_INFINITY,
        }
    }
}

/// Nelder-Mead from `x0`; each restart rebuilds the simplex around the best
/// point and the loop ends once a restart no longer improves by `ftol`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best_x = x0.to_vec();
    let mut best_f = eval(&best_x, &mut evals);
    let mut trace = vec![best_f];
    let mut iterations = 0;
    let mut converged = false;
    for restart in 0..=opts.max_restarts {
        let start_f = best_f;
        let step = opts.initial_step / (1 + restart) as f64;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        let mut local_converged = false;
        while evals < opts.max_evaluations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            iterations += 1;
            trace.push(simplex[0].1);
            if simplex[0].1 < opts.target {
                break;
            }
            let spread = simplex[n].1 - simplex[0].1;
            if spread.abs() <= opts.ftol {
                local_converged = true;
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid.iter().zip(worst).map(|(c, w)| c + t * (w - c)).collect()
            };
            let worst = simplex[n].0.clone();
            let xr = along(-1.0, &worst);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(-2.0, &worst);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[n].1 {
                    let xc = along(-0.5, &worst);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(0.5, &worst);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for item in simplex.iter_mut().skip(1) {
                        let xs: Vec<f64> = x0.iter().zip(&item.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                        let fs = eval(&xs, &mut evals);
                        *item = (xs, fs);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 <= best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if best_f < opts.target || evals >= opts.max_evaluations {
            break;
        }
        if local_converged && start_f - best_f <= opts.ftol {
            converged = true;
            break;
        }
    }
    Minimum {
        x: best_x,
        f: best_f,
        evaluations: evals,
        iterations,
        trace,
        converged,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop when `‖∇f‖_∞` falls below this.
    pub gtol: f64,
    /// Stop after `STALL_ITERATIONS` consecutive steps each decreasing `f`
    /// by at most `ftol·max(|f|, 1)`.
    pub ftol: f64,
    /// Stop as soon as the value drops below this.
    pub target: f64,
}

const STALL_ITERATIONS: usize = 5;
fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            memory: 12,
            max_iterations: 2000,
            gtol: 1e-11,
            ftol: 0.0,
            target: f64::NEG_INFINITY,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// L-BFGS with a backtracking Armijo line search. `fg` returns the value and
/// the gradient. Stops on a small gradient or when the line search can no
/// longer decrease `f`.
pub fn lbfgs<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(mut fg: F, x0: &[f64], opts: &LbfgsOptions) -> Minimum {
    let mut x = x0.to_vec();
    let (mut fx, mut g) = fg(&x);
    let mut evals = 1;
    let mut trace = vec![fx];
    let mut hist: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut stalls = 0;
    if !fx.is_finite() {
        return Minimum { x, f: fx, evaluations: evals, iterations, trace, converged };
    }
    for _ in 0..opts.max_iterations {
        iterations += 1;
        let gmax = norm_inf(&g);
        if gmax <= opts.gtol {
            converged = true;
            break;
        }
        if fx < opts.target {
            break;
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        let gamma = match hist.last() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0),
        };
        q.iter_mut().for_each(|v| *v *= gamma);
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hist.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            let (fnew, gnew) = fg(&xn);
            evals += 1;
            if fnew.is_finite() && fnew <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            converged = true;
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            hist.push((s, y, 1.0 / sy));
            if hist.len() > opts.memory {
                hist.remove(0);
            }
        }
        let stalled = fx - fnew <= 0.0;
        if fx - fnew <= opts.ftol * fx.abs().max(1.0) {
            stalls += 1;
        } else {
            stalls = 0;
        }
        x = xn;
        fx = fnew;
        g = gnew;
        trace.push(fx);
        if (stalled && hist.is_empty()) || stalls >= STALL_ITERATIONS {
            converged = true;
            break;
        }
    }
    Minimum {
        x,
        f: fx,
        evaluations: evals,
        iterations,
        trace,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let m = nelder_mead(rosenbrock, &[-1.2, 1.0], &NelderMeadOptions::default());
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{:?}", m.x);
    }

    #[test]
    fn lbfgs_rosenbrock() {
        let fg = |x: &[f64]| {
            let f = rosenbrock(x);
            let g = vec![
                -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
                200.0 * (x[1] - x[0] * x[0]),
            ];
            (f, g)
        };
        let m = lbfgs(fg, &[-1.2, 1.0], &LbfgsOptions::default());
        assert!((m.x[0] - 1.0).abs() < 1e-8 && (m.x[1] - 1.0).abs() < 1e-8, "{:?}", m.x);
    }

    #[test]
    fn lbfgs_high_dimensional_quadratic() {
        let n = 300;
        let fg = |x: &[f64]| {
            let f = x.iter().enumerate().map(|(i, v)| (1.0 + i as f64) * (v - 1.0).powi(2)).sum();
            let g = x.iter().enumerate().map(|(i, v)| 2.0 * (1.0 + i as f64) * (v - 1.0)).collect();
            (f, g)
        };
        let m = lbfgs(fg, &vec![0.0; n], &LbfgsOptions::default());
        assert!(m.x.iter().all(|v| (v - 1.0).abs() < 1e-10));
    }
}
