//! Quadrature grids on the unit sphere S^{n-1}, n ∈ {2, 3}.
//!
//! Directions are stored as `Vector3` in both dimensions; for n = 2 the third
//! coordinate is zero, so inner products need no dimension switch.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// A direction (or point) in R^n, zero-padded to three coordinates.
pub type Dir = Vector3<f64>;

/// Default node count of the planar grid.
pub const DEFAULT_UNIFORM_NODES: usize = 1024;

const LEBEDEV_590: &str = include_str!("data/lebedev590.txt");

/// Volume of the Euclidean unit ball ω_n.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => panic!("unit_ball_volume: dimension {n} outside {{2,3}}"),
    }
}

/// Surface measure of S^{n-1}, equal to n·ω_n.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

pub fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n, "2 or 3"))
    }
}

/// The unit vector at polar angle `theta` in the plane.
pub fn planar(theta: f64) -> Dir {
    Dir::new(theta.cos(), theta.sin(), 0.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridScheme {
    /// `m` equally spaced angles θ_j = 2πj/m with weights 2π/m.
    Uniform(usize),
    /// The 590-node Lebedev rule (exact for polynomials of degree ≤ 41).
    Lebedev590,
}

/// Nodes and positive weights of a quadrature rule for σ on S^{n-1}.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    dim: usize,
    scheme: GridScheme,
    nodes: Vec<Dir>,
    weights: Vec<f64>,
    antipodes: Vec<Option<usize>>,
}

impl PartialEq for SphereGrid {
    fn eq(&self, other: &Self) -> bool {
        self.scheme == other.scheme
    }
}

impl SphereGrid {
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidInput(format!(
                "uniform grid needs at least 8 nodes, got {m}"
            )));
        }
        let step = 2.0 * PI / m as f64;
        let mut nodes: Vec<Dir> = (0..m).map(|j| planar(step * j as f64)).collect();
        let symmetric = m % 2 == 0;
        if symmetric {
            // exact antipodes keep symmetric sums exactly paired
            for j in 0..m / 2 {
                nodes[j + m / 2] = -nodes[j];
            }
        }
        let antipodes = (0..m)
            .map(|j| symmetric.then_some((j + m / 2) % m))
            .collect();
        Ok(Self {
            dim: 2,
            scheme: GridScheme::Uniform(m),
            nodes,
            weights: vec![step; m],
            antipodes,
        })
    }

    pub fn lebedev590() -> Self {
        let mut nodes = Vec::with_capacity(590);
        let mut weights = Vec::with_capacity(590);
        for line in LEBEDEV_590.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse().expect("embedded Lebedev table is well formed"))
                .collect();
            nodes.push(Dir::new(v[0], v[1], v[2]));
            weights.push(v[3]);
        }
        assert_eq!(nodes.len(), 590);
        let antipodes = nodes
            .iter()
            .map(|u| nodes.iter().position(|v| (u + v).norm() < 1e-12))
            .collect();
        Self {
            dim: 3,
            scheme: GridScheme::Lebedev590,
            nodes,
            weights,
            antipodes,
        }
    }

    /// Parses `uniform-<m>` or `sym3d-590`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if spec == "sym3d-590" {
            return Ok(Self::lebedev590());
        }
        if let Some(m) = spec.strip_prefix("uniform-") {
            let m: usize = m
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad grid spec '{spec}'")))?;
            return Self::uniform(m);
        }
        Err(Error::InvalidInput(format!(
            "unknown grid spec '{spec}' (expected uniform-<m> or sym3d-590)"
        )))
    }

    pub fn spec(&self) -> String {
        match self.scheme {
            GridScheme::Uniform(m) => format!("uniform-{m}"),
            GridScheme::Lebedev590 => "sym3d-590".to_string(),
        }
    }

    /// Shared default grid: uniform-1024 for n = 2, sym3d-590 for n = 3.
    pub fn default_for(dim: usize) -> Result<Arc<SphereGrid>> {
        static PLANE: OnceLock<Arc<SphereGrid>> = OnceLock::new();
        static SPACE: OnceLock<Arc<SphereGrid>> = OnceLock::new();
        match dim {
            2 => Ok(PLANE
                .get_or_init(|| Arc::new(Self::uniform(DEFAULT_UNIFORM_NODES).unwrap()))
                .clone()),
            3 => Ok(SPACE.get_or_init(|| Arc::new(Self::lebedev590())).clone()),
            n => Err(Error::UnsupportedDimension(n, "2 or 3")),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scheme(&self) -> &GridScheme {
        &self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Dir] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> Dir {
        self.nodes[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True when every node has an antipodal partner of equal weight.
    pub fn is_symmetric(&self) -> bool {
        self.antipodes
            .iter()
            .enumerate()
            .all(|(j, a)| matches!(a, Some(k) if (self.weights[*k] - self.weights[j]).abs() <= 1e-14))
    }

    pub fn antipode(&self, j: usize) -> Option<usize> {
        self.antipodes[j]
    }

    /// One representative per antipodal pair, in increasing index order.
    pub fn antipodal_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let mut pairs = Vec::with_capacity(self.len() / 2);
        for j in 0..self.len() {
            let k = self.antipodes[j].ok_or_else(|| {
                Error::InvalidInput(format!("grid {} is not antipodally symmetric", self.spec()))
            })?;
            if j < k {
                pairs.push((j, k));
            }
        }
        Ok(pairs)
    }

    /// Index of a node equal to `u` within `tol`, if any.
    pub fn find_node(&self, u: &Dir, tol: f64) -> Option<usize> {
        match self.scheme {
            GridScheme::Uniform(m) => {
                let (j, frac) = self.locate(u);
                if frac * (2.0 * PI / m as f64) <= tol {
                    Some(j)
                } else if (1.0 - frac) * (2.0 * PI / m as f64) <= tol {
                    Some((j + 1) % m)
                } else {
                    None
                }
            }
            GridScheme::Lebedev590 => self.nodes.iter().position(|v| (v - u).norm() <= tol),
        }
    }

    /// For planar grids: the node index `j` preceding the angle of `u` and
    /// the fractional offset in [0, 1) towards node `j + 1`.
    pub fn locate(&self, u: &Dir) -> (usize, f64) {
        let m = match self.scheme {
            GridScheme::Uniform(m) => m,
            GridScheme::Lebedev590 => panic!("locate: planar grids only"),
        };
        let mut theta = u.y.atan2(u.x);
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        let x = theta / (2.0 * PI) * m as f64;
        let j = (x.floor() as usize).min(m - 1);
        let frac = (x - j as f64).clamp(0.0, 1.0);
        (j % m, frac)
    }

    /// Periodic 6-point Lagrange interpolation of planar grid samples at `u`.
    pub fn interpolate(&self, values: &[f64], u: &Dir) -> Result<f64> {
        match self.scheme {
            GridScheme::Uniform(m) => {
                let (j, t) = self.locate(u);
                if t == 0.0 {
                    return Ok(values[j]);
                }
                // stencil nodes at offsets -2..=3
                let mut acc = 0.0;
                for a in -2isize..=3 {
                    let mut l = 1.0;
                    for b in -2isize..=3 {
                        if a != b {
                            l *= (t - b as f64) / (a - b) as f64;
                        }
                    }
                    acc += l * values[((j as isize + a).rem_euclid(m as isize)) as usize];
                }
                Ok(acc)
            }
            GridScheme::Lebedev590 => match self.find_node(u, 1e-12) {
                Some(j) => Ok(values[j]),
                None => Err(Error::Unsupported(
                    "off-grid evaluation on the 3-D grid".to_string(),
                )),
            },
        }
    }

    /// The same rule with every node rotated by `rot` (planar grids only
    /// need the angle; the 3-D rule is rotated by the given matrix).
    pub fn rotated(&self, rot: &nalgebra::Matrix3<f64>) -> Self {
        let mut g = self.clone();
        for u in &mut g.nodes {
            *u = rot * *u;
        }
        g
    }
}
