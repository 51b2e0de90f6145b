use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_line_distance, Line3, Plane3, Point3, Vec3, Vector3};
use crate::wrap::{unit_cylinder, CylinderZ};

/// The six admissibility conditions on `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `a > 1/2`
    HalfWidth,
    /// `b < 1/(4a)`
    Offset,
    /// `c < 1`
    Height,
    /// `c^2 + t^2 >= 1`
    MiddleTangency,
    /// `4a^2 (c^2 + t^2) > (a+b)^2 + c^2 + t^2`, i.e. `d1 > 1`
    FarA,
    /// `4 (a^2 t^2 + b^2 c^2 + c^2 t^2) > (a+b)^2 + c^2 + t^2`, i.e. `d2 > 1`
    FarB,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::HalfWidth,
        Condition::Offset,
        Condition::Height,
        Condition::MiddleTangency,
        Condition::FarA,
        Condition::FarB,
    ];

    /// Position in the usual 1-based numbering.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Signed slack: positive when satisfied with room, NaN when undefined
    /// (conditions involving `t` for `a <= 1/2`).
    pub fn residual(self, a: f64, b: f64, c: f64) -> f64 {
        let t = t_of(a, b);
        let ct = c * c + t * t;
        let rhs = (a + b) * (a + b) + ct;
        match self {
            Condition::HalfWidth => a - 0.5,
            Condition::Offset => 1.0 / (4.0 * a) - b,
            Condition::Height => 1.0 - c,
            Condition::MiddleTangency => ct - 1.0,
            Condition::FarA => 4.0 * a * a * ct - rhs,
            Condition::FarB => 4.0 * (a * a * t * t + b * b * c * c + c * c * t * t) - rhs,
        }
    }

    pub fn holds(self, a: f64, b: f64, c: f64) -> bool {
        if a <= 0.5 && self >= Condition::MiddleTangency {
            return false;
        }
        let r = self.residual(a, b, c);
        match self {
            Condition::MiddleTangency => r >= 0.0,
            _ => r > 0.0,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

/// `t = (a - b) / sqrt(4a^2 - 1)`; NaN or infinite for `a <= 1/2`.
pub fn t_of(a: f64, b: f64) -> f64 {
    (a - b) / (4.0 * a * a - 1.0).sqrt()
}

/// Conditions violated by `(a, b, c)`; empty means admissible.
pub fn validate_params(a: f64, b: f64, c: f64) -> Vec<Condition> {
    if ![a, b, c].iter().all(|x| x.is_finite()) {
        return Condition::ALL.to_vec();
    }
    Condition::ALL
        .into_iter()
        .filter(|cond| !cond.holds(a, b, c))
        .collect()
}

/// An admissible design triple together with its derived `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t: f64,
}

impl ParamTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let violated = validate_params(a, b, c);
        if !violated.is_empty() {
            return Err(Error::Inadmissible(violated));
        }
        Ok(Self::unchecked(a, b, c))
    }

    pub(crate) fn unchecked(a: f64, b: f64, c: f64) -> Self {
        Self {
            a,
            b,
            c,
            t: t_of(a, b),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

impl TryFrom<[f64; 3]> for ParamTriple {
    type Error = Error;
    fn try_from(x: [f64; 3]) -> Result<Self> {
        ParamTriple::new(x[0], x[1], x[2])
    }
}

/// Anchor points `A(a,0,0)`, `B(-b,-t,c)`, `C(b,t,c)`, `D(-a,0,0)`, the ground
/// projections of `B` and `C`, and the unit cylinders on `AB`, `AD`, `DC`.
#[derive(Debug, Clone, Copy)]
pub struct AnchorFrame {
    pub params: ParamTriple,
    pub a: Point3,
    pub b: Point3,
    pub c: Point3,
    pub d: Point3,
    pub b0: Point3,
    pub c0: Point3,
    pub z1: CylinderZ,
    pub z2: CylinderZ,
    pub z3: CylinderZ,
}

pub fn anchor_frame(p: &ParamTriple) -> Result<AnchorFrame> {
    let ParamTriple { a, b, c, t } = *p;
    let pa = Vec3::new(a, 0.0, 0.0);
    let pb = Vec3::new(-b, -t, c);
    let pc = Vec3::new(b, t, c);
    let pd = Vec3::new(-a, 0.0, 0.0);
    Ok(AnchorFrame {
        params: *p,
        a: pa,
        b: pb,
        c: pc,
        d: pd,
        b0: Vec3::new(-b, -t, 0.0),
        c0: Vec3::new(b, t, 0.0),
        z1: unit_cylinder(pa, pb)?,
        z2: unit_cylinder(pa, pd)?,
        z3: unit_cylinder(pd, pc)?,
    })
}

/// `d`: distance between the parallelogram sides `AB0` and `DC0`;
/// `d1`, `d2`: distances of `A` and `B` from the line `DC`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabMetrics {
    pub d: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Closed-form slab metrics.
pub fn slab_metrics(frame: &AnchorFrame) -> SlabMetrics {
    let ParamTriple { a, b, c, t } = frame.params;
    let apb2 = (a + b) * (a + b);
    let dc = (apb2 + c * c + t * t).sqrt();
    SlabMetrics {
        d: 2.0 * a * t / (apb2 + t * t).sqrt(),
        d1: 2.0 * a * (c * c + t * t).sqrt() / dc,
        d2: 2.0 * (a * a * t * t + b * b * c * c + c * c * t * t).sqrt() / dc,
    }
}

/// Slab metrics from point-line distances on the anchor points.
pub fn slab_metrics_geometric(frame: &AnchorFrame) -> Result<SlabMetrics> {
    let dc0 = Line3::through(frame.d, frame.c0)?;
    let dc = Line3::through(frame.d, frame.c)?;
    Ok(SlabMetrics {
        d: point_line_distance(frame.a, &dc0),
        d1: point_line_distance(frame.a, &dc),
        d2: point_line_distance(frame.b, &dc),
    })
}

/// Frame attached to the plane `tau` through `D`, `C`, `C0`: its normal `nu`,
/// the in-plane direction `r` orthogonal to `DC`, and the cross-section
/// coordinates `u0`, `v0`, `w0` of `A` and `B` relative to the axis `DC`.
#[derive(Debug, Clone, Copy)]
pub struct TauFrame {
    pub nu: Vector3,
    pub r: Vector3,
    pub s: f64,
    pub u0: f64,
    pub v0: f64,
    pub w0: f64,
    pub plane: Plane3,
}

pub fn tau_frame(frame: &AnchorFrame) -> Result<TauFrame> {
    let ParamTriple { a, b, c, t } = frame.params;
    if c <= 0.0 {
        return Err(Error::Domain(format!("tau frame needs c > 0, got {c}")));
    }
    let apb = a + b;
    let s = (apb * apb + t * t) / c;
    let r_norm = (apb * apb + t * t + s * s).sqrt();
    let nu = Vec3::new(t, -apb, 0.0);
    Ok(TauFrame {
        nu,
        r: Vec3::new(apb, t, -s),
        s,
        u0: 2.0 * a * apb / r_norm,
        v0: 2.0 * (b * b + a * b + t * t) / r_norm,
        w0: (apb * apb - c * c + t * t) / (apb * apb + c * c + t * t).sqrt(),
        plane: Plane3::new(frame.d, nu)?,
    })
}
