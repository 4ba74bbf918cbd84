//! Convex and star bodies with the origin in their interior.
//!
//! A body is either exact (a polygon given by vertices or by halfplanes, or a
//! Euclidean ball) or sampled on a [`SphereGrid`] (support values with an
//! optional curvature density, or radial values of a star body).

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Matrix3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom2::{self, Polygon, Vec2};
use crate::sphere::{check_dim, planar, unit_ball_volume, Dir, GridScheme, SphereGrid};

/// Number of uniform angles used by the planar Hausdorff distance.
pub const HAUSDORFF_ANGLES: usize = 4096;

#[inline]
pub fn to_dir(v: &Vec2) -> Dir {
    Dir::new(v.x, v.y, 0.0)
}

#[inline]
pub fn to_vec2(u: &Dir) -> Vec2 {
    Vec2::new(u.x, u.y)
}

/// Support samples `h_j` (and optionally curvature `f_j = dS/dσ`) on a grid.
#[derive(Clone, Debug)]
pub struct GridBody {
    grid: Arc<SphereGrid>,
    support: Vec<f64>,
    curvature: Option<Vec<f64>>,
}

impl GridBody {
    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn support_values(&self) -> &[f64] {
        &self.support
    }

    pub fn curvature(&self) -> Option<&[f64]> {
        self.curvature.as_deref()
    }
}

/// A centered Euclidean ball; `grid` is the rule used for its surface measure.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: f64,
    grid: Arc<SphereGrid>,
}

impl Ball {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }
}

/// Radial samples `ρ_j` of a star body on a grid.
#[derive(Clone, Debug)]
pub struct StarBody {
    grid: Arc<SphereGrid>,
    radial: Vec<f64>,
}

impl StarBody {
    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn radial_values(&self) -> &[f64] {
        &self.radial
    }
}

#[derive(Clone, Debug)]
pub enum Body {
    Polygon(Polygon),
    /// A polygon given by tight halfplanes; geometrically identical to
    /// `Polygon`, kept apart so that serialization round-trips.
    HPolytope(Polygon),
    Grid(GridBody),
    Ball(Ball),
    Star(StarBody),
}

/// Surface area measure as weighted atoms, with `h_K` at every atom.
///
/// For grid bodies the atoms sit at the grid nodes with mass `w_j f_j`.
#[derive(Clone, Debug)]
pub struct SurfaceMeasure {
    dim: usize,
    dirs: Vec<Dir>,
    masses: Vec<f64>,
    supports: Vec<f64>,
    grid: Option<Arc<SphereGrid>>,
}

impl SurfaceMeasure {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn directions(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `h_K(u_i)` at each atom.
    pub fn supports(&self) -> &[f64] {
        &self.supports
    }

    /// The quadrature grid when the measure has a density.
    pub fn grid(&self) -> Option<&Arc<SphereGrid>> {
        self.grid.as_ref()
    }

    /// Density values `f_j` with respect to σ, for grid measures.
    pub fn densities(&self) -> Option<Vec<f64>> {
        self.grid.as_ref().map(|g| {
            self.masses
                .iter()
                .zip(g.weights())
                .map(|(m, w)| m / w)
                .collect()
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `‖Σ u_i S_i‖`, zero for a closed measure.
    pub fn closure_defect(&self) -> f64 {
        self.dirs
            .iter()
            .zip(&self.masses)
            .fold(Dir::zeros(), |acc, (u, m)| acc + u * *m)
            .norm()
    }

    /// `(1/n) Σ h_i S_i`.
    pub fn cone_volume(&self) -> f64 {
        self.supports
            .iter()
            .zip(&self.masses)
            .map(|(h, m)| h * m)
            .sum::<f64>()
            / self.dim as f64
    }

    /// Normalized cone-volume weights `h_i S_i / (n|K|)`, summing to one.
    pub fn cone_weights(&self) -> Vec<f64> {
        let total = self.cone_volume() * self.dim as f64;
        self.supports
            .iter()
            .zip(&self.masses)
            .map(|(h, m)| h * m / total)
            .collect()
    }

    /// Drops atoms of zero mass.
    pub fn without_null_atoms(&self) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.masses[i] > 0.0).collect();
        Self {
            dim: self.dim,
            dirs: keep.iter().map(|&i| self.dirs[i]).collect(),
            masses: keep.iter().map(|&i| self.masses[i]).collect(),
            supports: keep.iter().map(|&i| self.supports[i]).collect(),
            grid: None,
        }
    }

    /// The same measure with extra zero-mass atoms at `dirs`.
    pub fn with_null_atoms(&self, dirs: &[Dir], supports: &[f64]) -> Self {
        let mut out = self.clone();
        out.grid = None;
        out.dirs.extend_from_slice(dirs);
        out.masses.extend(std::iter::repeat_n(0.0, dirs.len()));
        out.supports.extend_from_slice(supports);
        out
    }
}

fn check_positive(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        Some(j) => Err(Error::OriginNotInterior(format!(
            "{what} value {} at node {j} is not positive",
            values[j]
        ))),
        None => Ok(()),
    }
}

fn matrix3(a: &DMatrix<f64>, n: usize) -> Result<Matrix3<f64>> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch(n, a.nrows().max(a.ncols())));
    }
    let mut m = Matrix3::identity();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
        }
    }
    Ok(m)
}

impl Body {
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        let v = vertices.iter().map(|p| Vec2::new(p[0], p[1])).collect();
        Ok(Body::Polygon(Polygon::from_vertices(v)?))
    }

    /// Intersection of halfplanes; redundant ones are dropped.
    pub fn hpolytope(normals: &[[f64; 2]], supports: &[f64]) -> Result<Self> {
        let n: Vec<Vec2> = normals.iter().map(|p| Vec2::new(p[0], p[1])).collect();
        let (p, _) = Polygon::from_halfplanes(&n, supports)?;
        Ok(Body::HPolytope(p))
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball_on(SphereGrid::default_for(dim)?, radius)
    }

    pub fn ball_on(grid: Arc<SphereGrid>, radius: f64) -> Result<Self> {
        check_dim(grid.dim())?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::OriginNotInterior(format!("ball radius {radius}")));
        }
        Ok(Body::Ball(Ball { radius, grid }))
    }

    pub fn grid(grid: Arc<SphereGrid>, support: Vec<f64>, curvature: Option<Vec<f64>>) -> Result<Self> {
        check_dim(grid.dim())?;
        if support.len() != grid.len() {
            return Err(Error::DimensionMismatch(grid.len(), support.len()));
        }
        check_positive(&support, "support")?;
        if let Some(f) = &curvature {
            if f.len() != grid.len() {
                return Err(Error::DimensionMismatch(grid.len(), f.len()));
            }
            check_positive(f, "curvature")?;
        }
        Ok(Body::Grid(GridBody {
            grid,
            support,
            curvature,
        }))
    }

    pub fn star(grid: Arc<SphereGrid>, radial: Vec<f64>) -> Result<Self> {
        check_dim(grid.dim())?;
        if radial.len() != grid.len() {
            return Err(Error::DimensionMismatch(grid.len(), radial.len()));
        }
        check_positive(&radial, "radial")?;
        Ok(Body::Star(StarBody { grid, radial }))
    }

    /// A ball sampled as a grid body with exact curvature `r^{n-1}`.
    pub fn ball_grid(grid: Arc<SphereGrid>, radius: f64) -> Result<Self> {
        let n = grid.dim();
        let m = grid.len();
        Self::grid(grid, vec![radius; m], Some(vec![radius.powi(n as i32 - 1); m]))
    }

    /// The centered square `[-a, a]²`.
    pub fn square(a: f64) -> Result<Self> {
        Self::polygon(&[[-a, -a], [a, -a], [a, a], [-a, a]])
    }

    /// Regular `m`-gon with the given circumradius and a vertex on the x-axis.
    pub fn regular_polygon(m: usize, circumradius: f64) -> Result<Self> {
        let v: Vec<[f64; 2]> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        Self::polygon(&v)
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Polygon(_) | Body::HPolytope(_) => 2,
            Body::Grid(g) => g.grid.dim(),
            Body::Ball(b) => b.grid.dim(),
            Body::Star(s) => s.grid.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Polygon(_) => "polygon",
            Body::HPolytope(_) => "hpolytope",
            Body::Grid(_) => "grid",
            Body::Ball(_) => "ball",
            Body::Star(_) => "star",
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, Body::Star(_))
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Some(p),
            _ => None,
        }
    }

    fn not_convex(&self, op: &str) -> Error {
        Error::Unsupported(format!("{op} of a star body"))
    }

    /// Support function `h_K(u)`; positively homogeneous in `u`.
    pub fn support(&self, u: &Dir) -> Result<f64> {
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Ok(p.support(&to_vec2(u))),
            Body::Ball(b) => Ok(b.radius * u.norm()),
            Body::Grid(g) => {
                let r = u.norm();
                Ok(r * g.grid.interpolate(&g.support, &(u / r))?)
            }
            Body::Star(_) => Err(self.not_convex("support")),
        }
    }

    /// Radial function `ρ(u)`, homogeneous of degree −1 in `u`.
    pub fn radial(&self, u: &Dir) -> Result<f64> {
        let r = u.norm();
        let u = u / r;
        let value = match self {
            Body::Polygon(p) | Body::HPolytope(p) => p.radial(&to_vec2(&u)),
            Body::Ball(b) => b.radius,
            Body::Star(s) => s.grid.interpolate(&s.radial, &u)?,
            // discrete Aleksandrov body of the samples
            Body::Grid(g) => g
                .grid
                .nodes()
                .iter()
                .zip(&g.support)
                .filter_map(|(v, h)| {
                    let d = v.dot(&u);
                    (d > 1e-12).then(|| h / d)
                })
                .fold(f64::INFINITY, f64::min),
        };
        Ok(value / r)
    }

    pub fn volume(&self) -> Result<f64> {
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Ok(p.area()),
            Body::Ball(b) => Ok(unit_ball_volume(self.dim()) * b.radius.powi(self.dim() as i32)),
            Body::Grid(_) => Ok(self.surface_measure()?.cone_volume()),
            Body::Star(s) => {
                let n = s.grid.dim() as i32;
                Ok(s.grid
                    .weights()
                    .iter()
                    .zip(&s.radial)
                    .map(|(w, r)| w * r.powi(n))
                    .sum::<f64>()
                    / n as f64)
            }
        }
    }

    pub fn polar_volume(&self) -> Result<f64> {
        let n = self.dim() as i32;
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Ok(p.polar_area()),
            Body::Ball(b) => Ok(unit_ball_volume(n as usize) * b.radius.powi(-n)),
            Body::Grid(g) => Ok(g
                .grid
                .weights()
                .iter()
                .zip(&g.support)
                .map(|(w, h)| w * h.powi(-n))
                .sum::<f64>()
                / n as f64),
            Body::Star(_) => Err(self.not_convex("polar volume")),
        }
    }

    pub fn surface_measure(&self) -> Result<SurfaceMeasure> {
        let dim = self.dim();
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Ok(SurfaceMeasure {
                dim,
                dirs: p.normals().iter().map(to_dir).collect(),
                masses: p.edge_lengths().to_vec(),
                supports: p.offsets().to_vec(),
                grid: None,
            }),
            Body::Ball(b) => Ok(SurfaceMeasure {
                dim,
                dirs: b.grid.nodes().to_vec(),
                masses: b
                    .grid
                    .weights()
                    .iter()
                    .map(|w| w * b.radius.powi(dim as i32 - 1))
                    .collect(),
                supports: vec![b.radius; b.grid.len()],
                grid: Some(b.grid.clone()),
            }),
            Body::Grid(g) => {
                let f = g.curvature.as_ref().ok_or(Error::CurvatureRequired)?;
                Ok(SurfaceMeasure {
                    dim,
                    dirs: g.grid.nodes().to_vec(),
                    masses: g.grid.weights().iter().zip(f).map(|(w, f)| w * f).collect(),
                    supports: g.support.clone(),
                    grid: Some(g.grid.clone()),
                })
            }
            Body::Star(_) => Err(self.not_convex("surface measure")),
        }
    }

    /// `(r_K, R_K)`: the largest centered ball inside and the smallest
    /// centered ball containing the body.
    pub fn inner_outer_radii(&self) -> (f64, f64) {
        let minmax = |v: &[f64]| {
            v.iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(*x), hi.max(*x)))
        };
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => (
                p.offsets().iter().cloned().fold(f64::INFINITY, f64::min),
                p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max),
            ),
            Body::Ball(b) => (b.radius, b.radius),
            Body::Grid(g) => minmax(&g.support),
            Body::Star(s) => minmax(&s.radial),
        }
    }

    pub fn vrad(&self) -> Result<f64> {
        let n = self.dim();
        Ok((self.volume()? / unit_ball_volume(n)).powf(1.0 / n as f64))
    }

    /// The polar body. Grid bodies polarize to star bodies with `ρ = 1/h`.
    pub fn polar(&self) -> Result<Body> {
        match self {
            Body::Polygon(p) => Ok(Body::Polygon(p.polar()?)),
            Body::HPolytope(p) => Ok(Body::HPolytope(p.polar()?)),
            Body::Ball(b) => Self::ball_on(b.grid.clone(), 1.0 / b.radius),
            Body::Grid(g) => Self::star(g.grid.clone(), g.support.iter().map(|h| 1.0 / h).collect()),
            Body::Star(_) => Err(self.not_convex("polar")),
        }
    }

    pub fn centroid(&self) -> Result<Dir> {
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => Ok(to_dir(&p.centroid())),
            Body::Ball(_) => Ok(Dir::zeros()),
            Body::Star(s) => {
                // ∫_L x dx = (1/(n+1)) ∫ ρ^{n+1} u dσ
                let n = s.grid.dim() as i32;
                let moment = s
                    .grid
                    .nodes()
                    .iter()
                    .zip(s.grid.weights())
                    .zip(&s.radial)
                    .fold(Dir::zeros(), |acc, ((u, w), r)| acc + u * (w * r.powi(n + 1)));
                Ok(moment / ((n + 1) as f64 * self.volume()?))
            }
            Body::Grid(g) => {
                let m = match g.grid.scheme() {
                    GridScheme::Uniform(m) => *m,
                    GridScheme::Lebedev590 => {
                        return Err(Error::Unsupported("centroid of a 3-D grid body".into()))
                    }
                };
                let f = g.curvature.as_ref().ok_or(Error::CurvatureRequired)?;
                let step = 2.0 * PI / m as f64;
                let h = &g.support;
                let at = |j: isize| h[j.rem_euclid(m as isize) as usize];
                // boundary point x(u) = h u + h' u⊥; ∫_K x = (1/3) ∫ x h dS
                let mut moment = Dir::zeros();
                for j in 0..m {
                    let i = j as isize;
                    let dh = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * step);
                    let u = g.grid.node(j);
                    let perp = Dir::new(-u.y, u.x, 0.0);
                    let x = u * h[j] + perp * dh;
                    moment += x * (h[j] * f[j] * g.grid.weights()[j]);
                }
                Ok(moment / (3.0 * self.volume()?))
            }
        }
    }

    /// The translate `K + z`; `z` must keep the origin interior.
    pub fn translate(&self, z: &Dir) -> Result<Body> {
        match self {
            Body::Polygon(p) => Ok(Body::Polygon(p.translate(&to_vec2(z))?)),
            Body::HPolytope(p) => {
                let t = p.translate(&to_vec2(z))?;
                Ok(Body::HPolytope(t))
            }
            Body::Ball(b) => {
                let n = b.grid.dim() as i32;
                let h = b.grid.nodes().iter().map(|u| b.radius + u.dot(z)).collect();
                Self::grid(b.grid.clone(), h, Some(vec![b.radius.powi(n - 1); b.grid.len()]))
            }
            Body::Grid(g) => {
                let h = g
                    .grid
                    .nodes()
                    .iter()
                    .zip(&g.support)
                    .map(|(u, h)| h + u.dot(z))
                    .collect();
                Self::grid(g.grid.clone(), h, g.curvature.clone())
            }
            Body::Star(_) => Err(self.not_convex("translate")),
        }
    }

    /// The dilate `sK`, `s > 0`.
    pub fn scale(&self, s: f64) -> Result<Body> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!("dilation factor {s}")));
        }
        let n = self.dim() as i32;
        match self {
            Body::Polygon(p) => Ok(Body::Polygon(p.scale(s)?)),
            Body::HPolytope(p) => Ok(Body::HPolytope(p.scale(s)?)),
            Body::Ball(b) => Self::ball_on(b.grid.clone(), b.radius * s),
            Body::Grid(g) => Self::grid(
                g.grid.clone(),
                g.support.iter().map(|h| h * s).collect(),
                g.curvature
                    .as_ref()
                    .map(|f| f.iter().map(|f| f * s.powi(n - 1)).collect()),
            ),
            Body::Star(st) => Self::star(st.grid.clone(), st.radial.iter().map(|r| r * s).collect()),
        }
    }

    /// The image `AK` under an invertible linear map.
    pub fn linear_image(&self, a: &DMatrix<f64>) -> Result<Body> {
        let n = self.dim();
        let m = matrix3(a, n)?;
        let det = m.determinant();
        let scale = m.abs().max();
        if !(det.abs() > 1e-14 * scale.powi(n as i32)) || !det.is_finite() {
            return Err(Error::SingularMatrix);
        }
        let at = m.transpose();
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => {
                let a2 = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
                let img = p.transform(&a2)?;
                Ok(match self {
                    Body::Polygon(_) => Body::Polygon(img),
                    _ => Body::HPolytope(img),
                })
            }
            Body::Ball(b) => {
                let ata = at * m;
                let c = ata[(0, 0)];
                if (ata - Matrix3::identity() * c).abs().max() <= 1e-14 * c.abs()
                    || (n == 2 && (ata.fixed_view::<2, 2>(0, 0) - Matrix2::identity() * c).abs().max() <= 1e-14 * c)
                {
                    return Self::ball_on(b.grid.clone(), b.radius * c.sqrt());
                }
                let grid = b.grid.clone();
                let (h, f): (Vec<f64>, Vec<f64>) = grid
                    .nodes()
                    .iter()
                    .map(|v| {
                        let s = (at * v).norm();
                        (
                            b.radius * s,
                            det * det * b.radius.powi(n as i32 - 1) * s.powi(-(n as i32 + 1)),
                        )
                    })
                    .unzip();
                Self::grid(grid, h, Some(f))
            }
            Body::Grid(g) => {
                if n != 2 {
                    return Err(Error::Unsupported("linear image of a 3-D grid body".into()));
                }
                let grid = g.grid.clone();
                let mut h = Vec::with_capacity(grid.len());
                let mut f = g.curvature.as_ref().map(|_| Vec::with_capacity(grid.len()));
                for v in grid.nodes() {
                    let w = at * v;
                    let s = w.norm();
                    let u = w / s;
                    h.push(s * grid.interpolate(&g.support, &u)?);
                    if let (Some(out), Some(fk)) = (f.as_mut(), g.curvature.as_ref()) {
                        out.push(det * det * s.powi(-3) * grid.interpolate(fk, &u)?);
                    }
                }
                Self::grid(grid, h, f)
            }
            Body::Star(st) => {
                if n != 2 {
                    return Err(Error::Unsupported("linear image of a 3-D star body".into()));
                }
                let inv = m.try_inverse().ok_or(Error::SingularMatrix)?;
                let rho = st
                    .grid
                    .nodes()
                    .iter()
                    .map(|v| {
                        let w = inv * v;
                        let s = w.norm();
                        Ok(st.grid.interpolate(&st.radial, &(w / s))? / s)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Self::star(st.grid.clone(), rho)
            }
        }
    }

    /// Directions where the support function may have kinks or extrema
    /// (edge normals and vertex directions of polygons).
    fn critical_directions(&self) -> Vec<Dir> {
        match self {
            Body::Polygon(p) | Body::HPolytope(p) => p
                .normals()
                .iter()
                .map(to_dir)
                .chain(p.vertices().iter().map(|v| to_dir(&v.normalize())))
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// `sup |h_K − h_L|` over a dense direction set.
///
/// In the plane the set is a 4096-angle grid merged with both bodies' edge
/// normals and vertex directions; the error for smooth bodies is O(step²).
/// In space the nodes of the bodies' own grids are used.
pub fn hausdorff_distance(k: &Body, l: &Body) -> Result<f64> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch(k.dim(), l.dim()));
    }
    if !k.is_convex() || !l.is_convex() {
        return Err(Error::Unsupported("Hausdorff distance of star bodies".into()));
    }
    let dirs: Vec<Dir> = if k.dim() == 2 {
        (0..HAUSDORFF_ANGLES)
            .map(|j| planar(2.0 * PI * j as f64 / HAUSDORFF_ANGLES as f64))
            .chain(k.critical_directions())
            .chain(l.critical_directions())
            .collect()
    } else {
        let grid = match (k, l) {
            (Body::Grid(g), _) | (_, Body::Grid(g)) => g.grid.clone(),
            (Body::Ball(b), _) => b.grid.clone(),
            _ => SphereGrid::default_for(3)?,
        };
        grid.nodes().to_vec()
    };
    let mut d: f64 = 0.0;
    for u in &dirs {
        d = d.max((k.support(u)? - l.support(u)?).abs());
    }
    Ok(d)
}

/// The Aleksandrov body `∩ {⟨x,u_i⟩ ≤ f_i}` in the plane, with the index of
/// the direction behind each of its edges.
pub fn aleksandrov_polygon(directions: &[Dir], f: &[f64]) -> Result<(Polygon, Vec<usize>)> {
    if directions.iter().any(|u| u.z != 0.0) {
        return Err(Error::UnsupportedDimension(3, "2"));
    }
    let normals: Vec<Vec2> = directions.iter().map(to_vec2).collect();
    Polygon::from_halfplanes(&normals, f)
}

pub fn aleksandrov_body(directions: &[Dir], f: &[f64]) -> Result<Body> {
    Ok(Body::HPolytope(aleksandrov_polygon(directions, f)?.0))
}

/// A random convex polygon: 5–9 points at random angles with radii in
/// [0.6, 1.4], hulled and translated so its centroid is the origin.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R) -> Body {
    loop {
        let m = rng.random_range(5..=9);
        let pts: Vec<Vec2> = (0..m)
            .map(|_| {
                let t = rng.random_range(0.0..2.0 * PI);
                let r = rng.random_range(0.6..1.4);
                Vec2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let hull: Vec<Vec2> = geom2::convex_hull(&pts, geom2::CONVEX_TOL)
            .into_iter()
            .map(|i| pts[i])
            .collect();
        if hull.len() < 3 {
            continue;
        }
        let c = geom2::centroid_of(&hull);
        let shifted = hull.iter().map(|v| v - c).collect();
        if let Ok(p) = Polygon::from_vertices(shifted) {
            // avoid slivers that make optimizers crawl
            if p.offsets().iter().cloned().fold(f64::INFINITY, f64::min) > 0.15 {
                return Body::Polygon(p);
            }
        }
    }
}

pub fn random_polygon_seeded(seed: u64) -> Body {
    random_polygon(&mut ChaCha8Rng::seed_from_u64(seed))
}
