//! Shortest contour joining two points outside a circular cylinder while
//! enclosing it: tangent segment, helix arc, tangent segment.
//!
//! In the cross-section through the axis point `O`, the projected endpoints are
//! `E' = (-u, h)` and `F' = (v, h)` in the frame `(r, n)` where `n` is the unit
//! normal of a plane through the axis and `r = n x e` (sign chosen so `E'` has a
//! negative abscissa). Tangent segments from `E'` and `F'` touch the unit circle
//! at polar angles `pi - phi1 - psi1` and `phi2 + psi2`; the arc between them
//! is the one facing the endpoints. Unrolling the cylinder turns the contour into
//! a straight segment of horizontal extent `p1 + p + p2` and vertical extent `w`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_plane_distance, Line3, Plane3, Point3, Polyline3, Vector3};

/// Radicands in `[-TANGENCY_WINDOW, 0)` are treated as exact tangency.
pub const TANGENCY_WINDOW: f64 = 1e-9;

/// Tolerance for the plane/axis/equidistance preconditions of [`wrap_parameters`].
pub const PLACEMENT_TOL: f64 = 1e-9;

/// Cross-section description of a wrap in units of the cylinder radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrapParams {
    /// Common distance of the endpoints from the plane through the axis.
    pub h: f64,
    /// Abscissa of the first endpoint, measured away from the second.
    pub u: f64,
    /// Abscissa of the second endpoint.
    pub v: f64,
    /// Axial separation of the endpoints.
    pub w: f64,
}

impl WrapParams {
    pub fn new(h: f64, u: f64, v: f64, w: f64) -> Self {
        Self { h, u, v, w }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.h, self.v, self.u, self.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrapSolution {
    pub phi1: f64,
    pub phi2: f64,
    pub psi1: f64,
    pub psi2: f64,
    /// Angular extent of the helix arc (its length on the unit circle).
    pub p: f64,
    /// Tangent segment lengths in the cross-section.
    pub p1: f64,
    pub p2: f64,
    pub length: f64,
}

impl WrapSolution {
    /// Horizontal extent of the unrolled contour.
    pub fn unrolled_width(&self) -> f64 {
        self.p1 + self.p + self.p2
    }

    /// 3D lengths of the two straight pieces (first, last).
    pub fn segment_lengths(&self) -> (f64, f64) {
        let s = self.unrolled_width();
        (self.length * self.p1 / s, self.length * self.p2 / s)
    }

    pub fn arc_length(&self) -> f64 {
        self.length * self.p / self.unrolled_width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderZ {
    axis: Line3,
    radius: f64,
}

impl CylinderZ {
    pub fn new(axis: Line3, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cylinder radius must be positive, got {radius}"
            )));
        }
        Ok(Self { axis, radius })
    }

    pub fn unit(axis: Line3) -> Self {
        Self { axis, radius: 1.0 }
    }

    pub fn axis(&self) -> &Line3 {
        &self.axis
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn distance_to_axis(&self, p: Point3) -> f64 {
        crate::geom::point_line_distance(p, &self.axis)
    }
}

fn tangent_radicand(h: f64, x: f64, which: &str) -> Result<f64> {
    let r = h * h + x * x - 1.0;
    if r < -TANGENCY_WINDOW {
        return Err(Error::Domain(format!(
            "{which}: h^2 + {which}^2 = {} < 1, endpoint inside the cylinder",
            r + 1.0
        )));
    }
    Ok(r.max(0.0))
}

/// Closed-form angles, tangent lengths and unrolled length of a wrap.
pub fn wrap_angles(params: &WrapParams) -> Result<WrapSolution> {
    let WrapParams { h, u, v, w } = *params;
    if ![h, u, v, w].iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !(0.0..1.0).contains(&h) {
        return Err(Error::Domain(format!("h = {h} outside [0, 1)")));
    }
    if u <= 0.0 || v <= 0.0 {
        return Err(Error::Domain(format!(
            "abscissae must be positive (u = {u}, v = {v})"
        )));
    }
    if w < 0.0 {
        return Err(Error::Domain(format!("w = {w} is negative")));
    }
    let r1 = tangent_radicand(h, u, "u")?;
    let r2 = tangent_radicand(h, v, "v")?;
    Ok(solve(h, u, v, w, r1, r2))
}

fn solve(h: f64, u: f64, v: f64, w: f64, r1: f64, r2: f64) -> WrapSolution {
    let phi1 = h.atan2(u);
    let phi2 = h.atan2(v);
    // 1/sqrt(1 + r) = cos(psi); clamped radicands give psi = 0 exactly.
    let psi1 = (1.0 / (1.0 + r1).sqrt()).min(1.0).acos();
    let psi2 = (1.0 / (1.0 + r2).sqrt()).min(1.0).acos();
    // paired sums keep the result bit-identical under swapping the endpoints
    let p = PI - (phi1 + phi2) - (psi1 + psi2);
    let p1 = r1.sqrt();
    let p2 = r2.sqrt();
    let s = (p1 + p2) + p;
    WrapSolution {
        phi1,
        phi2,
        psi1,
        psi2,
        p,
        p1,
        p2,
        length: s.hypot(w),
    }
}

/// Same formula with every radicand clamped and `h` unrestricted; finite for any
/// finite input. Used only as a surrogate outside the admissible domain.
pub(crate) fn wrap_angles_relaxed(params: &WrapParams) -> WrapSolution {
    let WrapParams { h, u, v, w } = *params;
    let r1 = (h * h + u * u - 1.0).max(0.0);
    let r2 = (h * h + v * v - 1.0).max(0.0);
    solve(h, u, v, w, r1, r2)
}

/// A wrap placed in space: cross-section frame plus its closed-form solution.
#[derive(Debug, Clone, Copy)]
pub struct Wrap {
    start: Point3,
    end: Point3,
    origin: Point3,
    radius: f64,
    /// In-plane direction, start endpoint on its negative side.
    r_hat: Vector3,
    /// Unit normal of the reference plane, towards the endpoints.
    n_hat: Vector3,
    e_hat: Vector3,
    z_start: f64,
    z_end: f64,
    params: WrapParams,
    solution: WrapSolution,
}

impl Wrap {
    pub fn new(cyl: &CylinderZ, e: Point3, f: Point3, tau: &Plane3) -> Result<Self> {
        let radius = cyl.radius;
        let e_hat = cyl.axis.unit_direction();
        let origin = cyl.axis.origin();
        let mut n_hat = tau.unit_normal();
        if n_hat.dot(e_hat).abs() > PLACEMENT_TOL
            || point_plane_distance(origin, tau).abs() > PLACEMENT_TOL
        {
            return Err(Error::Construction(
                "reference plane does not contain the cylinder axis".into(),
            ));
        }
        let he = point_plane_distance(e, tau);
        let hf = point_plane_distance(f, tau);
        if (he - hf).abs() > PLACEMENT_TOL {
            return Err(Error::Construction(format!(
                "endpoints are not equidistant from the reference plane ({he} vs {hf})"
            )));
        }
        if he < 0.0 {
            n_hat = -n_hat;
        }
        let h = 0.5 * (he.abs() + hf.abs());

        let mut r_hat = n_hat.cross(e_hat);
        let mut xe = (e - origin).dot(r_hat);
        if xe > 0.0 {
            r_hat = -r_hat;
            xe = -xe;
        }
        let xf = (f - origin).dot(r_hat);
        if !(xe < 0.0 && xf > 0.0) {
            return Err(Error::Construction(
                "endpoint projections are not on opposite sides of the foot line".into(),
            ));
        }
        let params = WrapParams {
            h: h / radius,
            u: -xe / radius,
            v: xf / radius,
            w: 0.0,
        };
        for (x, name) in [(params.u, "start"), (params.v, "end")] {
            if params.h * params.h + x * x < 1.0 - TANGENCY_WINDOW {
                return Err(Error::Construction(format!(
                    "{name} point lies inside the cylinder"
                )));
            }
        }
        let z_start = (e - origin).dot(e_hat);
        let z_end = (f - origin).dot(e_hat);
        let params = WrapParams {
            w: (z_end - z_start).abs() / radius,
            ..params
        };
        let solution = wrap_angles(&params)?;
        Ok(Self {
            start: e,
            end: f,
            origin,
            radius,
            r_hat,
            n_hat,
            e_hat,
            z_start,
            z_end,
            params,
            solution,
        })
    }

    pub fn params(&self) -> &WrapParams {
        &self.params
    }

    pub fn solution(&self) -> &WrapSolution {
        &self.solution
    }

    /// Total 3D length of the contour.
    pub fn length(&self) -> f64 {
        self.solution.length * self.radius
    }

    /// Polar angles of the first and last tangency points.
    pub fn arc_angles(&self) -> (f64, f64) {
        let s = &self.solution;
        (PI - s.phi1 - s.psi1, s.phi2 + s.psi2)
    }

    fn surface_point(&self, theta: f64, z: f64) -> Point3 {
        let (sn, cs) = theta.sin_cos();
        self.origin + (self.r_hat * cs + self.n_hat * sn) * self.radius + self.e_hat * z
    }

    /// Axial coordinate at unrolled abscissa `s` (unit-radius units).
    fn axial_at(&self, s: f64) -> f64 {
        let total = self.solution.unrolled_width();
        self.z_start + (self.z_end - self.z_start) * (s / total)
    }

    /// The helix point at polar angle `theta`, if `theta` lies on the arc.
    pub fn point_at_angle(&self, theta: f64) -> Option<Point3> {
        let (t0, t1) = self.arc_angles();
        if theta > t0 + 1e-15 || theta < t1 - 1e-15 {
            return None;
        }
        let s = self.solution.p1 + (t0 - theta);
        Some(self.surface_point(theta, self.axial_at(s)))
    }

    /// Polar angle of a point's projection into the cross-section frame.
    pub fn polar_angle(&self, q: Point3) -> f64 {
        let d = q - self.origin;
        d.dot(self.n_hat).atan2(d.dot(self.r_hat))
    }

    /// First and last tangency points.
    pub fn tangent_points(&self) -> (Point3, Point3) {
        let (t0, t1) = self.arc_angles();
        (
            self.surface_point(t0, self.axial_at(self.solution.p1)),
            self.surface_point(t1, self.axial_at(self.solution.p1 + self.solution.p)),
        )
    }

    /// Samples: start, `n_arc + 1` uniform-angle helix points, end. A tangent
    /// segment shorter than [`TANGENCY_WINDOW`] collapses onto its endpoint.
    pub fn sample(&self, n_arc: usize) -> Result<Vec<Point3>> {
        if n_arc < 2 {
            return Err(Error::InvalidArgument(format!(
                "n_arc must be at least 2, got {n_arc}"
            )));
        }
        let s = &self.solution;
        let (t0, _) = self.arc_angles();
        let mut pts = Vec::with_capacity(n_arc + 3);
        pts.push(self.start);
        let first = if s.p1 * self.radius > TANGENCY_WINDOW { 0 } else { 1 };
        let last = if s.p2 * self.radius > TANGENCY_WINDOW {
            n_arc
        } else {
            n_arc - 1
        };
        for k in first..=last {
            let frac = k as f64 / n_arc as f64;
            let theta = t0 - s.p * frac;
            pts.push(self.surface_point(theta, self.axial_at(s.p1 + s.p * frac)));
        }
        pts.push(self.end);
        Ok(pts)
    }

    pub fn curve(&self, n_arc: usize) -> Result<Polyline3> {
        Polyline3::open(self.sample(n_arc)?)
    }
}

/// Cross-section parameters `(h, u, v, w)` of the wrap from `e` to `f` around
/// `cyl`, relative to the plane `tau` through its axis.
pub fn wrap_parameters(cyl: &CylinderZ, e: Point3, f: Point3, tau: &Plane3) -> Result<WrapParams> {
    Wrap::new(cyl, e, f, tau).map(|w| w.params)
}

/// Sampled contour `e -> P -> helix -> Q -> f`.
pub fn wrap_curve(
    cyl: &CylinderZ,
    e: Point3,
    f: Point3,
    tau: &Plane3,
    n_arc: usize,
) -> Result<Polyline3> {
    Wrap::new(cyl, e, f, tau)?.curve(n_arc)
}

/// The plane through the axis of `cyl` from which `e` and `f` are equidistant
/// on the same side, oriented towards them.
pub fn enclosing_plane(cyl: &CylinderZ, e: Point3, f: Point3) -> Result<Plane3> {
    let axis = cyl.axis();
    let e_hat = axis.unit_direction();
    let project = |q: Point3| {
        let d = q - axis.origin();
        d - e_hat * d.dot(e_hat)
    };
    let chord = project(f) - project(e);
    let normal = e_hat
        .cross(chord)
        .try_normalize()
        .ok_or_else(|| Error::Construction("endpoints project to the same point".into()))?;
    let plane = Plane3::new(axis.origin(), normal)?;
    if point_plane_distance(e, &plane) < 0.0 {
        Ok(plane.flipped())
    } else {
        Ok(plane)
    }
}

/// Shorthand used by the curve constructors.
pub(crate) fn unit_cylinder(p: Point3, q: Point3) -> Result<CylinderZ> {
    Ok(CylinderZ::unit(Line3::through(p, q)?))
}
