//! Short space curves of unit width.
//!
//! Builds the polygonal and cylinder-wrapping curves `L1..L5`, evaluates their
//! lengths in closed form, minimizes the open-curve lengths over their design
//! parameters, and certifies curve width from the convex hull of samples.

pub mod error;
pub mod exec;
pub mod export;
pub mod family;
pub mod geom;
pub mod hull;
pub mod optim;
pub mod report;
pub mod width;
pub mod wrap;

pub use error::{Error, Result};
pub use exec::Execution;
pub use family::{CurveKind, CurveSpec, ParamTriple};
pub use geom::{Point3, Polyline3, Vec3, Vector3};
pub use hull::{convex_hull, Polytope};
pub use optim::{grid_refine, minimize, Family, ObjectiveSpec, OptimResult};
pub use width::{curve_width, polytope_width, support_width, WidthReport};
pub use wrap::{wrap_angles, WrapParams, WrapSolution};
