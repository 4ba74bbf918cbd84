//! JSON body format.
//!
//! ```json
//! {"kind":"polygon","vertices":[[x,y],...]}
//! {"kind":"hpolytope","normals":[[ux,uy],...],"supports":[h,...]}
//! {"kind":"grid","dim":2,"grid":"uniform-1024","support":[...],"curvature":[...]}
//! {"kind":"ball","dim":2,"radius":1.0,"grid":"uniform-512"}
//! {"kind":"star","dim":2,"grid":"uniform-1024","radial":[...]}
//! ```
//!
//! `curvature` and the ball's `grid` are optional.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::sphere::{check_dim, SphereGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Hpolytope {
        normals: Vec<[f64; 2]>,
        supports: Vec<f64>,
    },
    Grid {
        dim: usize,
        grid: String,
        support: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        curvature: Option<Vec<f64>>,
    },
    Ball {
        dim: usize,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<String>,
    },
    Star {
        dim: usize,
        grid: String,
        radial: Vec<f64>,
    },
}

fn load_grid(spec: &str, dim: usize) -> Result<Arc<SphereGrid>> {
    check_dim(dim)?;
    let g = SphereGrid::from_spec(spec)?;
    if g.dim() != dim {
        return Err(Error::DimensionMismatch(dim, g.dim()));
    }
    Ok(Arc::new(g))
}

impl BodySpec {
    pub fn build(&self) -> Result<Body> {
        match self {
            BodySpec::Polygon { vertices } => Body::polygon(vertices),
            BodySpec::Hpolytope { normals, supports } => {
                if normals.len() != supports.len() {
                    return Err(Error::DimensionMismatch(normals.len(), supports.len()));
                }
                Body::hpolytope(normals, supports)
            }
            BodySpec::Grid { dim, grid, support, curvature } => {
                Body::grid(load_grid(grid, *dim)?, support.clone(), curvature.clone())
            }
            BodySpec::Ball { dim, radius, grid } => match grid {
                Some(g) => Body::ball_on(load_grid(g, *dim)?, *radius),
                None => {
                    check_dim(*dim)?;
                    Body::ball(*dim, *radius)
                }
            },
            BodySpec::Star { dim, grid, radial } => Body::star(load_grid(grid, *dim)?, radial.clone()),
        }
    }

    pub fn of(body: &Body) -> Self {
        // `+ 0.0` folds negative zeros so equal bodies serialize identically
        let pair = |v: &crate::geom2::Vec2| [v.x + 0.0, v.y + 0.0];
        match body {
            Body::Polygon(p) => BodySpec::Polygon {
                vertices: p.vertices().iter().map(pair).collect(),
            },
            Body::HPolytope(p) => BodySpec::Hpolytope {
                normals: p.normals().iter().map(pair).collect(),
                supports: p.offsets().to_vec(),
            },
            Body::Grid(g) => BodySpec::Grid {
                dim: g.grid().dim(),
                grid: g.grid().spec(),
                support: g.support_values().to_vec(),
                curvature: g.curvature().map(|c| c.to_vec()),
            },
            Body::Ball(b) => BodySpec::Ball {
                dim: b.grid().dim(),
                radius: b.radius(),
                grid: Some(b.grid().spec()),
            },
            Body::Star(s) => BodySpec::Star {
                dim: s.grid().dim(),
                grid: s.grid().spec(),
                radial: s.radial_values().to_vec(),
            },
        }
    }
}

pub fn parse_body(json: &str) -> Result<Body> {
    let spec: BodySpec =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("malformed body JSON: {e}")))?;
    spec.build()
}

pub fn read_body(path: &Path) -> Result<Body> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_body(&text)
}

pub fn body_to_json(body: &Body) -> serde_json::Value {
    serde_json::to_value(BodySpec::of(body)).expect("body spec serializes")
}
