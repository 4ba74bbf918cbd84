//! Exact planar geometry: convex hulls, halfplane intersections and convex
//! polygons with the origin in their interior.
//!
//! Halfplane intersections are computed through polarity: the body
//! `{x : ⟨x,u_i⟩ ≤ h_i}` is the polar of `conv{u_i/h_i}`, so a single convex
//! hull decides boundedness, redundancy and the vertex order at once.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Tolerance for strict convex position of polygon vertices.
pub const CONVEX_TOL: f64 = 1e-12;
/// Tolerance below which a halfspace counts as redundant.
pub const TIGHT_TOL: f64 = 1e-10;
/// Normals closer than this angle count as parallel.
pub const PARALLEL_TOL: f64 = 1e-9;

#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Strict left turn a → b → c, with a tolerance relative to the edge lengths.
#[inline]
fn left_turn(a: &Vec2, b: &Vec2, c: &Vec2, tol: f64) -> bool {
    let ab = b - a;
    let bc = c - b;
    cross(&ab, &bc) > tol * ab.norm() * bc.norm()
}

/// Indices of the convex hull vertices in counterclockwise order, with
/// (near-)collinear points dropped. Monotone chain.
pub fn convex_hull(points: &[Vec2], tol: f64) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && !left_turn(
                    &points[hull[hull.len() - 2]],
                    &points[hull[hull.len() - 1]],
                    &points[i],
                    tol,
                )
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Signed shoelace area of a closed vertex loop.
pub fn shoelace(vertices: &[Vec2]) -> f64 {
    let m = vertices.len();
    (0..m)
        .map(|i| cross(&vertices[i], &vertices[(i + 1) % m]))
        .sum::<f64>()
        * 0.5
}

/// Centroid of the region bounded by a simple vertex loop.
pub fn centroid_of(vertices: &[Vec2]) -> Vec2 {
    let m = vertices.len();
    let mut c = Vec2::zeros();
    let mut a2 = 0.0;
    for i in 0..m {
        let (p, q) = (vertices[i], vertices[(i + 1) % m]);
        let w = cross(&p, &q);
        a2 += w;
        c += (p + q) * w;
    }
    c / (3.0 * a2)
}

/// Area of `conv{points}` together with its gradient with respect to each
/// point (zero for points that are not hull vertices).
pub fn hull_area_with_gradient(points: &[Vec2]) -> (f64, Vec<Vec2>) {
    let hull = convex_hull(points, 0.0);
    let m = hull.len();
    let mut grad = vec![Vec2::zeros(); points.len()];
    if m < 3 {
        return (0.0, grad);
    }
    let mut area = 0.0;
    for k in 0..m {
        let prev = points[hull[(k + m - 1) % m]];
        let cur = points[hull[k]];
        let next = points[hull[(k + 1) % m]];
        area += cross(&cur, &next);
        grad[hull[k]] = 0.5 * Vec2::new(next.y - prev.y, prev.x - next.x);
    }
    (0.5 * area, grad)
}

/// A convex polygon in counterclockwise order with the origin strictly inside.
///
/// Edge `i` runs from `vertices[i]` to `vertices[i+1]`, has outer unit normal
/// `normals[i]` and lies on the line `⟨x, normals[i]⟩ = offsets[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    normals: Vec<Vec2>,
    offsets: Vec<f64>,
    lengths: Vec<f64>,
}

impl Polygon {
    /// Builds from vertices in convex position (either orientation).
    pub fn from_vertices(vertices: Vec<Vec2>) -> Result<Self> {
        let mut vertices = vertices;
        if vertices.len() < 3 {
            return Err(Error::NotConvex(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(Error::InvalidInput("non-finite vertex".into()));
        }
        if shoelace(&vertices) < 0.0 {
            vertices.reverse();
        }
        let m = vertices.len();
        for i in 0..m {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % m], &vertices[(i + 2) % m]);
            if !left_turn(a, b, c, CONVEX_TOL) {
                return Err(Error::NotConvex(format!(
                    "vertices {}, {}, {} are not in strictly convex position",
                    i,
                    (i + 1) % m,
                    (i + 2) % m
                )));
            }
        }
        // winding check: a star polygon can pass the local turn test
        let turning: f64 = (0..m)
            .map(|i| {
                let e0 = vertices[(i + 1) % m] - vertices[i];
                let e1 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
                cross(&e0, &e1).atan2(e0.dot(&e1))
            })
            .sum();
        if (turning - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::NotConvex("vertex loop winds more than once".into()));
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut normals = Vec::with_capacity(m);
        let mut offsets = Vec::with_capacity(m);
        let mut lengths = Vec::with_capacity(m);
        for i in 0..m {
            let d = vertices[(i + 1) % m] - vertices[i];
            let len = d.norm();
            let n = Vec2::new(d.y, -d.x) / len;
            let c = n.dot(&vertices[i]);
            if c <= CONVEX_TOL * scale {
                return Err(Error::OriginNotInterior(format!(
                    "edge {i} passes at distance {c:e} from the origin"
                )));
            }
            normals.push(n);
            offsets.push(c);
            lengths.push(len);
        }
        Ok(Self {
            vertices,
            normals,
            offsets,
            lengths,
        })
    }

    /// Convex hull of arbitrary points; the origin must end up interior.
    pub fn hull_of(points: &[Vec2]) -> Result<Self> {
        let idx = convex_hull(points, CONVEX_TOL);
        Self::from_vertices(idx.iter().map(|&i| points[i]).collect())
    }

    /// Intersection of halfplanes `⟨x, u_i⟩ ≤ h_i` (unit `u_i`, `h_i > 0`).
    ///
    /// Returns the polygon and, for each of its edges, the index of the
    /// halfplane it came from. Halfplanes within `TIGHT_TOL` of redundancy are
    /// dropped.
    pub fn from_halfplanes(normals: &[Vec2], supports: &[f64]) -> Result<(Self, Vec<usize>)> {
        Self::from_halfplanes_tol(normals, supports, TIGHT_TOL)
    }

    pub fn from_halfplanes_tol(
        normals: &[Vec2],
        supports: &[f64],
        tol: f64,
    ) -> Result<(Self, Vec<usize>)> {
        if normals.len() != supports.len() {
            return Err(Error::InvalidInput(format!(
                "{} normals but {} supports",
                normals.len(),
                supports.len()
            )));
        }
        if let Some((i, h)) = supports.iter().enumerate().find(|(_, h)| !(**h > 0.0)) {
            return Err(Error::OriginNotInterior(format!(
                "support value {h} at halfplane {i} is not positive"
            )));
        }
        if normals.iter().any(|u| !(u.norm() > 0.0) || !u.norm().is_finite()) {
            return Err(Error::InvalidInput("zero or non-finite normal".into()));
        }
        // ⟨x,u⟩ ≤ h  ⇔  ⟨x,u/|u|⟩ ≤ h/|u|
        let supports: Vec<f64> = normals.iter().zip(supports).map(|(u, h)| h / u.norm()).collect();
        let points: Vec<Vec2> = normals
            .iter()
            .zip(&supports)
            .map(|(u, h)| u / (u.norm() * h))
            .collect();
        // among nearly parallel normals only the tightest halfplane survives;
        // intersecting the others would divide by a vanishing determinant
        let mut order: Vec<usize> = (0..points.len()).collect();
        let angle = |i: usize| normals[i].y.atan2(normals[i].x);
        order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
        let mut keep: Vec<usize> = Vec::with_capacity(order.len());
        for &i in &order {
            if let Some(&j) = keep.last() {
                if angle(i) - angle(j) < PARALLEL_TOL {
                    if supports[i] < supports[j] {
                        *keep.last_mut().unwrap() = i;
                    }
                    continue;
                }
            }
            keep.push(i);
        }
        if keep.len() > 1 {
            let (first, last) = (keep[0], keep[keep.len() - 1]);
            if angle(first) + 2.0 * std::f64::consts::PI - angle(last) < PARALLEL_TOL {
                if supports[last] < supports[first] {
                    keep[0] = last;
                }
                keep.pop();
            }
        }
        let kept: Vec<Vec2> = keep.iter().map(|&i| points[i]).collect();
        let hull: Vec<usize> = convex_hull(&kept, tol).into_iter().map(|i| keep[i]).collect();
        let m = hull.len();
        if m < 3 {
            return Err(Error::DirectionsDoNotBound);
        }
        for k in 0..m {
            let a = points[hull[k]];
            let b = points[hull[(k + 1) % m]];
            let e = b - a;
            if cross(&e, &(-a)) <= 1e-14 * e.norm() * a.norm() {
                return Err(Error::DirectionsDoNotBound);
            }
        }
        let unit: Vec<Vec2> = hull.iter().map(|&i| normals[i] / normals[i].norm()).collect();
        let corner = |a: usize, b: usize| -> Vec2 {
            let (ua, ub) = (unit[a], unit[b]);
            let (ha, hb) = (supports[hull[a]], supports[hull[b]]);
            let det = ua.x * ub.y - ua.y * ub.x;
            Vec2::new((ha * ub.y - hb * ua.y) / det, (ua.x * hb - ub.x * ha) / det)
        };
        // vertex i closes edge i-1 and opens edge i
        let vertices: Vec<Vec2> = (0..m).map(|i| corner((i + m - 1) % m, i)).collect();
        let lengths = (0..m)
            .map(|i| (vertices[(i + 1) % m] - vertices[i]).norm())
            .collect();
        let offsets = hull.iter().map(|&i| supports[i]).collect();
        Ok((
            Self {
                vertices,
                normals: unit,
                offsets,
                lengths,
            },
            hull,
        ))
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vec2] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn centroid(&self) -> Vec2 {
        centroid_of(&self.vertices)
    }

    pub fn support(&self, u: &Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest t with t·u in the polygon, for a unit (or any nonzero) `u`.
    pub fn radial(&self, u: &Vec2) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .filter_map(|(n, c)| {
                let d = n.dot(u);
                (d > 0.0).then(|| c / d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The polar polygon `{x : ⟨x, v⟩ ≤ 1 for all vertices v}`.
    pub fn polar(&self) -> Result<Self> {
        let ones = vec![1.0; self.vertices.len()];
        Ok(Self::from_halfplanes_tol(&self.vertices, &ones, 0.0)?.0)
    }

    /// Area of the polar polygon, i.e. of `conv{u_i / h_i}` over the edges.
    pub fn polar_area(&self) -> f64 {
        let pts: Vec<Vec2> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, c)| n / *c)
            .collect();
        shoelace(&pts)
    }

    pub fn transform(&self, a: &Matrix2<f64>) -> Result<Self> {
        Self::from_vertices(self.vertices.iter().map(|v| a * v).collect())
    }

    pub fn translate(&self, z: &Vec2) -> Result<Self> {
        Self::from_vertices(self.vertices.iter().map(|v| v + z).collect())
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor {s} is not positive")));
        }
        // exact: no re-validation, so nearly flat corners survive
        Ok(Self {
            vertices: self.vertices.iter().map(|v| v * s).collect(),
            normals: self.normals.clone(),
            offsets: self.offsets.iter().map(|c| c * s).collect(),
            lengths: self.lengths.iter().map(|l| l * s).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::from_vertices(vec![
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_basics() {
        let s = square();
        assert_eq!(s.area(), 4.0);
        assert_eq!(s.polar_area(), 2.0);
        assert_eq!(s.edge_lengths(), &[2.0; 4]);
        assert!(s.centroid().norm() < 1e-15);
        let d = Vec2::new(1.0, 1.0).normalize();
        assert!((s.support(&d) - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.radial(&d) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_collinear_and_exterior_origin() {
        let collinear = vec![
            Vec2::new(-1.0, -1.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(matches!(
            Polygon::from_vertices(collinear),
            Err(Error::NotConvex(_))
        ));
        let shifted = vec![Vec2::new(1.0, 0.0), Vec2::new(3.0, 0.0), Vec2::new(2.0, 1.0)];
        assert!(matches!(
            Polygon::from_vertices(shifted),
            Err(Error::OriginNotInterior(_))
        ));
    }

    #[test]
    fn halfplanes_drop_redundant_and_detect_unbounded() {
        let normals = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(1.0, 1.0).normalize(),
        ];
        let (p, src) = Polygon::from_halfplanes(&normals, &[1.0, 1.0, 1.0, 1.0, 5.0]).unwrap();
        assert_eq!(p.len(), 4);
        assert!(!src.contains(&4));
        assert!((p.area() - 4.0).abs() < 1e-14);
        let half = &normals[..3];
        assert_eq!(
            Polygon::from_halfplanes(half, &[1.0, 1.0, 1.0]).unwrap_err(),
            Error::DirectionsDoNotBound
        );
    }

    #[test]
    fn hull_gradient_matches_finite_differences() {
        let pts = vec![
            Vec2::new(1.0, 0.1),
            Vec2::new(0.2, 1.3),
            Vec2::new(-0.9, 0.4),
            Vec2::new(-0.5, -1.1),
            Vec2::new(0.8, -0.7),
            Vec2::new(0.1, 0.1),
        ];
        let (a, g) = hull_area_with_gradient(&pts);
        let h = 1e-7;
        for i in 0..pts.len() {
            for k in 0..2 {
                let mut p = pts.clone();
                p[i][k] += h;
                let (ap, _) = hull_area_with_gradient(&p);
                p[i][k] -= 2.0 * h;
                let (am, _) = hull_area_with_gradient(&p);
                assert!(((ap - am) / (2.0 * h) - g[i][k]).abs() < 1e-6);
            }
        }
        assert!(a > 0.0);
        assert_eq!(g[5], Vec2::zeros());
    }
}
