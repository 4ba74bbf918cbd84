//! Orlicz mixed volumes, Orlicz geominimal and affine surface areas, and
//! solvers for Orlicz-Petty bodies, in dimension two (exactly) and three (by
//! spherical quadrature).

pub mod bodies;
pub mod error;
pub mod functionals;
pub mod geom2;
pub mod io;
pub mod mixed_vol;
pub mod optimize;
pub mod orlicz_add;
pub mod orlicz_fn;
pub mod petty;
pub mod quad;
pub mod roots;
pub mod sphere;

pub use bodies::{Body, SurfaceMeasure};
pub use error::{Error, Result};
pub use orlicz_fn::OrliczFn;
pub use sphere::{Dir, SphereGrid};
