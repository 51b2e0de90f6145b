//! Closed curves over the regular tetrahedron of edge `sqrt(2)`: the 4-gon `L4`
//! and the smoothed curve `L5` built from four congruent wraps.

use serde::{Deserialize, Serialize};

use super::cube_tetrahedron;
use crate::error::{Error, Result};
use crate::geom::{point_plane_distance, Plane3, Point3, Polyline3};
use crate::wrap::{enclosing_plane, unit_cylinder, CylinderZ, Wrap, WrapSolution};

/// Maximum allowed miss of the wrap `i` through the midpoint `O_i`.
pub const MIDPOINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct TetraFrame {
    /// `A, B, C, D`; `L4 = ABCDA`.
    pub vertices: [Point3; 4],
    /// Midpoints `O1..O4` of the sides `AB, BC, CD, DA`.
    pub midpoints: [Point3; 4],
    /// `A', B', C', D'`: on `AC` resp. `BD`, at distance 1 from the face
    /// opposite the nearby vertex.
    pub primed: [Point3; 4],
    /// Unit cylinders wrapped by the parts `A'B'`, `B'C'`, `C'D'`, `D'A'`: on the
    /// edges `CD`, `DA`, `AB`, `BC` opposite the side carrying `O_i`.
    pub cylinders: [CylinderZ; 4],
}

/// Point on the segment from `from` towards `to` at unit distance from `face`.
fn at_unit_distance(from: Point3, to: Point3, face: &Plane3) -> Result<Point3> {
    let h0 = point_plane_distance(from, face).abs();
    let h1 = point_plane_distance(to, face).abs();
    if !(h0 > 1.0 && h1 < 1.0) {
        return Err(Error::Construction(format!(
            "no point at distance 1 between heights {h0} and {h1}"
        )));
    }
    // the distance is affine along the segment
    Ok(from.lerp(to, (h0 - 1.0) / (h0 - h1)))
}

pub fn tetra_frame() -> Result<TetraFrame> {
    let v = cube_tetrahedron();
    let [a, b, c, d] = v;
    let face = |p, q, r| Plane3::through(p, q, r);
    let primed = [
        at_unit_distance(a, c, &face(b, c, d)?)?,
        at_unit_distance(b, d, &face(a, c, d)?)?,
        at_unit_distance(c, a, &face(a, b, d)?)?,
        at_unit_distance(d, b, &face(a, b, c)?)?,
    ];
    Ok(TetraFrame {
        vertices: v,
        midpoints: [a.midpoint(b), b.midpoint(c), c.midpoint(d), d.midpoint(a)],
        primed,
        cylinders: [
            unit_cylinder(c, d)?,
            unit_cylinder(d, a)?,
            unit_cylinder(a, b)?,
            unit_cylinder(b, c)?,
        ],
    })
}

/// `L4 = ABCDA`.
pub fn make_l4() -> Polyline3 {
    Polyline3::closed(cube_tetrahedron().to_vec()).expect("distinct tetrahedron vertices")
}

/// How closely wrap `i` passes the midpoint `O_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointCheck {
    pub part: usize,
    pub miss: f64,
}

/// The four wraps of `L5` in traversal order, each checked to pass within
/// [`MIDPOINT_TOL`] of its midpoint `O_i`.
pub fn l5_wraps() -> Result<([Wrap; 4], [MidpointCheck; 4])> {
    let tf = tetra_frame()?;
    let mut wraps = Vec::with_capacity(4);
    let mut checks = Vec::with_capacity(4);
    for i in 0..4 {
        let (e, f) = (tf.primed[i], tf.primed[(i + 1) % 4]);
        let cyl = &tf.cylinders[i];
        let plane = enclosing_plane(cyl, e, f)?;
        let wrap = Wrap::new(cyl, e, f, &plane)?;
        let o = tf.midpoints[i];
        let miss = wrap
            .point_at_angle(wrap.polar_angle(o))
            .map(|q| q.distance(o))
            .unwrap_or(f64::INFINITY);
        if miss > MIDPOINT_TOL {
            return Err(Error::Construction(format!(
                "part {} misses its midpoint O{} by {miss:e}",
                i + 1,
                i + 1
            )));
        }
        wraps.push(wrap);
        checks.push(MidpointCheck { part: i + 1, miss });
    }
    let wraps: [Wrap; 4] = wraps.try_into().expect("four parts");
    let checks: [MidpointCheck; 4] = checks.try_into().expect("four parts");
    Ok((wraps, checks))
}

/// Closed-form length of `L5` from the unrolled wraps.
pub fn length_l5() -> Result<f64> {
    Ok(l5_wraps()?.0.iter().map(Wrap::length).sum())
}

pub fn l5_part_solution() -> Result<WrapSolution> {
    Ok(*l5_wraps()?.0[0].solution())
}

pub fn build_l5(n_arc: usize) -> Result<Polyline3> {
    let (wraps, _) = l5_wraps()?;
    let mut pts: Vec<Point3> = Vec::with_capacity(4 * (n_arc + 3));
    for w in &wraps {
        let part = w.sample(n_arc)?;
        let skip = usize::from(!pts.is_empty());
        pts.extend(part.into_iter().skip(skip));
    }
    // the last part ends at A', the first point
    pts.pop();
    Polyline3::closed(pts)
}
