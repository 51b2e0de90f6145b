//! The curve families `L1..L5`: parameter validation, anchor geometry,
//! closed-form lengths and sampled polylines.

mod closed;
mod open;
mod params;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use closed::{
    build_l5, l5_part_solution, l5_wraps, length_l5, make_l4, tetra_frame, MidpointCheck,
    TetraFrame, MIDPOINT_TOL,
};
pub use open::{
    angle_check_l3, build_l1, build_l2, build_l3, end_wrap_params, l2_wraps, l3_chord,
    length_l2, length_l3, middle_solution, middle_wrap_params, L3Chord,
};
pub(crate) use open::relaxed_lengths;
pub use params::{
    anchor_frame, slab_metrics, slab_metrics_geometric, t_of, tau_frame, validate_params,
    AnchorFrame, Condition, ParamTriple, SlabMetrics, TauFrame,
};

use crate::error::{Error, Result};
use crate::geom::{polyline_length, Point3, Polyline3, Vec3};

/// Published minimizer of `|L2(a,b,c)|`.
pub const L2_PUBLISHED: [f64; 3] = [0.77925, 0.04223, 0.78744];
/// Published minimizer of `|L3(a,b,c)|`.
pub const L3_PUBLISHED: [f64; 3] = [0.761337, 0.064738, 0.794982];

/// Default helix sample count for exported geometry.
pub const DEFAULT_N_ARC: usize = 1024;

/// Alternate corners of the unit cube: a regular tetrahedron of edge `sqrt(2)`.
pub fn cube_tetrahedron() -> [Point3; 4] {
    [
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(1.0, 0.0, 1.0),
        Vec3::new(0.0, 1.0, 1.0),
    ]
}

/// Half-turn about the z axis.
pub fn mirror_z(p: Point3) -> Point3 {
    Vec3::new(-p.x, -p.y, p.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl CurveKind {
    pub fn needs_params(self) -> bool {
        matches!(self, CurveKind::L2 | CurveKind::L3)
    }

    pub fn is_closed(self) -> bool {
        matches!(self, CurveKind::L4 | CurveKind::L5)
    }

    /// Whether the sampled polyline is the curve itself (no helix arcs).
    pub fn is_polygonal(self) -> bool {
        matches!(self, CurveKind::L1 | CurveKind::L4)
    }

    pub fn default_params(self) -> Option<[f64; 3]> {
        match self {
            CurveKind::L2 => Some(L2_PUBLISHED),
            CurveKind::L3 => Some(L3_PUBLISHED),
            _ => None,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L1" => Ok(CurveKind::L1),
            "L2" => Ok(CurveKind::L2),
            "L3" => Ok(CurveKind::L3),
            "L4" => Ok(CurveKind::L4),
            "L5" => Ok(CurveKind::L5),
            _ => Err(Error::InvalidArgument(format!("unknown curve {s:?}"))),
        }
    }
}

/// A fully specified curve instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub params: Option<ParamTriple>,
}

impl CurveSpec {
    /// `params` must be given exactly for `L2` and `L3`.
    pub fn new(kind: CurveKind, params: Option<[f64; 3]>) -> Result<Self> {
        let params = match (kind.needs_params(), params) {
            (true, Some(p)) => Some(ParamTriple::try_from(p)?),
            (true, None) => {
                return Err(Error::InvalidArgument(format!("{kind} needs (a, b, c)")))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidArgument(format!("{kind} takes no parameters")))
            }
            (false, None) => None,
        };
        Ok(Self { kind, params })
    }

    /// The curve with its published parameters, if it has any.
    pub fn published(kind: CurveKind) -> Self {
        Self::new(kind, kind.default_params()).expect("published parameters are admissible")
    }

    fn triple(&self) -> ParamTriple {
        self.params.expect("validated at construction")
    }

    pub fn build(&self, n_arc: usize) -> Result<Polyline3> {
        match self.kind {
            CurveKind::L1 => Ok(build_l1()),
            CurveKind::L2 => build_l2(&self.triple(), n_arc),
            CurveKind::L3 => build_l3(&self.triple(), n_arc),
            CurveKind::L4 => Ok(make_l4()),
            CurveKind::L5 => build_l5(n_arc),
        }
    }

    /// Exact length from the closed forms.
    pub fn closed_form_length(&self) -> Result<f64> {
        match self.kind {
            CurveKind::L1 => Ok(polyline_length(&build_l1())),
            CurveKind::L2 => length_l2(&self.triple()),
            CurveKind::L3 => length_l3(&self.triple()),
            CurveKind::L4 => Ok(polyline_length(&make_l4())),
            CurveKind::L5 => length_l5(),
        }
    }
}
