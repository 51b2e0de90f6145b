//! Floating-point 3D primitives: vectors, lines, planes and polylines.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum separation between consecutive polyline points.
pub const MIN_SEPARATION: f64 = 1e-12;

/// A point or free vector in R^3.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub type Point3 = Vec3;
pub type Vector3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn try_normalize(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn midpoint(self, o: Vec3) -> Vec3 {
        (self + o) * 0.5
    }

    /// Linear interpolation `self + t (o - self)`.
    pub fn lerp(self, o: Vec3, t: f64) -> Vec3 {
        self + (o - self) * t
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// An infinite line through `origin` along `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line3 {
    origin: Point3,
    direction: Vector3,
}

impl Line3 {
    pub fn new(origin: Point3, direction: Vector3) -> Result<Self> {
        if !origin.is_finite() || !direction.is_finite() {
            return Err(Error::NonFinite);
        }
        if direction.norm() <= 0.0 {
            return Err(Error::ZeroVector("line direction"));
        }
        Ok(Self { origin, direction })
    }

    pub fn through(p: Point3, q: Point3) -> Result<Self> {
        Self::new(p, q - p)
    }

    pub fn origin(&self) -> Point3 {
        self.origin
    }

    pub fn direction(&self) -> Vector3 {
        self.direction
    }

    pub fn unit_direction(&self) -> Vector3 {
        self.direction / self.direction.norm()
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn project(&self, p: Point3) -> Point3 {
        let e = self.unit_direction();
        self.origin + e * (p - self.origin).dot(e)
    }
}

/// A plane through `point` with normal `normal` (not necessarily unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane3 {
    point: Point3,
    normal: Vector3,
}

impl Plane3 {
    pub fn new(point: Point3, normal: Vector3) -> Result<Self> {
        if !point.is_finite() || !normal.is_finite() {
            return Err(Error::NonFinite);
        }
        if normal.norm() <= 0.0 {
            return Err(Error::ZeroVector("plane normal"));
        }
        Ok(Self { point, normal })
    }

    /// Plane through three points, normal `(b - a) x (c - a)`.
    pub fn through(a: Point3, b: Point3, c: Point3) -> Result<Self> {
        Self::new(a, (b - a).cross(c - a))
    }

    pub fn point(&self) -> Point3 {
        self.point
    }

    pub fn normal(&self) -> Vector3 {
        self.normal
    }

    pub fn unit_normal(&self) -> Vector3 {
        self.normal / self.normal.norm()
    }

    pub fn flipped(&self) -> Plane3 {
        Plane3 {
            point: self.point,
            normal: -self.normal,
        }
    }
}

/// An ordered sequence of at least two points, optionally closed.
///
/// Consecutive points (and, for closed polylines, the last and first) must be
/// more than [`MIN_SEPARATION`] apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolylineRepr", into = "PolylineRepr")]
pub struct Polyline3 {
    points: Vec<Point3>,
    closed: bool,
}

#[derive(Serialize, Deserialize)]
struct PolylineRepr {
    points: Vec<[f64; 3]>,
    closed: bool,
}

impl TryFrom<PolylineRepr> for Polyline3 {
    type Error = Error;
    fn try_from(r: PolylineRepr) -> Result<Self> {
        Polyline3::new(r.points.into_iter().map(Vec3::from).collect(), r.closed)
    }
}

impl From<Polyline3> for PolylineRepr {
    fn from(p: Polyline3) -> Self {
        PolylineRepr {
            points: p.points.iter().map(|v| v.to_array()).collect(),
            closed: p.closed,
        }
    }
}

impl Polyline3 {
    pub fn new(points: Vec<Point3>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0].distance(w[1]) <= MIN_SEPARATION {
                return Err(Error::DuplicatePoint { index: i + 1 });
            }
        }
        if closed && points[0].distance(points[points.len() - 1]) <= MIN_SEPARATION {
            return Err(Error::DuplicatePoint { index: 0 });
        }
        Ok(Self { points, closed })
    }

    pub fn open(points: Vec<Point3>) -> Result<Self> {
        Self::new(points, false)
    }

    pub fn closed(points: Vec<Point3>) -> Result<Self> {
        Self::new(points, true)
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Segments in traversal order, including the closing one.
    pub fn segments(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Applies `f` to every point. Fails if the image violates the separation rule.
    pub fn map(&self, f: impl Fn(Point3) -> Point3) -> Result<Polyline3> {
        Polyline3::new(self.points.iter().map(|&p| f(p)).collect(), self.closed)
    }

    pub fn reversed(&self) -> Polyline3 {
        let mut points = self.points.clone();
        points.reverse();
        Polyline3 {
            points,
            closed: self.closed,
        }
    }
}

pub fn polyline_length(poly: &Polyline3) -> f64 {
    poly.segments().map(|(p, q)| p.distance(q)).sum()
}

pub fn point_line_distance(p: Point3, l: &Line3) -> f64 {
    (p - l.origin).cross(l.direction).norm() / l.direction.norm()
}

/// Signed distance of `p` from `pl`, positive on the side the normal points to.
pub fn point_plane_distance(p: Point3, pl: &Plane3) -> f64 {
    (p - pl.point).dot(pl.normal) / pl.normal.norm()
}

/// Distance between two lines (zero for intersecting lines).
pub fn line_line_distance(l1: &Line3, l2: &Line3) -> f64 {
    let n = l1.direction.cross(l2.direction);
    if n.norm() <= 1e-15 * l1.direction.norm() * l2.direction.norm() {
        // parallel
        return point_line_distance(l2.origin, l1);
    }
    (l2.origin - l1.origin).dot(n).abs() / n.norm()
}

/// Rotation of `v` about unit axis `k` by `angle` (Rodrigues).
pub fn rotate(v: Vec3, k: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}

/// Any unit vector orthogonal to `v`.
pub fn any_orthogonal(v: Vec3) -> Vec3 {
    let a = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
        Vec3::X
    } else if v.y.abs() <= v.z.abs() {
        Vec3::Y
    } else {
        Vec3::Z
    };
    v.cross(a).try_normalize().expect("nonzero input vector")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_of_simple_polylines() {
        let p = Polyline3::open(vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(polyline_length(&p), 2.0);

        let sq = Polyline3::closed(vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(polyline_length(&sq), 4.0);
    }

    #[test]
    fn polyline_rejects_duplicates() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 0.0, 0.0);
        assert!(matches!(
            Polyline3::open(vec![a, b, b]),
            Err(Error::DuplicatePoint { index: 2 })
        ));
        assert!(matches!(
            Polyline3::closed(vec![a, b, a]),
            Err(Error::DuplicatePoint { index: 0 })
        ));
        assert!(Polyline3::open(vec![a]).is_err());
        assert!(Polyline3::open(vec![a, Vec3::new(f64::NAN, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn distances() {
        let l = Line3::new(Vec3::ZERO, Vec3::X).unwrap();
        assert_eq!(point_line_distance(Vec3::new(0.0, 1.0, 0.0), &l), 1.0);
        assert_eq!(point_line_distance(Vec3::new(3.5, 0.0, 0.0), &l), 0.0);
        assert!(Line3::new(Vec3::ZERO, Vec3::ZERO).is_err());

        let pl = Plane3::new(Vec3::ZERO, Vec3::Z).unwrap();
        assert_eq!(point_plane_distance(Vec3::new(0.0, 0.0, 1.0), &pl), 1.0);
        assert_eq!(point_plane_distance(Vec3::new(0.3, -2.0, 0.0), &pl), 0.0);
        let scaled = Plane3::new(Vec3::ZERO, Vec3::Z * 7.5).unwrap();
        assert_eq!(point_plane_distance(Vec3::new(0.0, 0.0, -2.0), &scaled), -2.0);
    }

    #[test]
    fn tetrahedron_altitude() {
        // Vertex A of the edge-sqrt(2) tetrahedron to the opposite face.
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 1.0, 0.0);
        let c = Vec3::new(1.0, 0.0, 1.0);
        let d = Vec3::new(0.0, 1.0, 1.0);
        let pl = Plane3::through(b, c, d).unwrap();
        let h = point_plane_distance(a, &pl).abs();
        // Oracle: volume = |det| / 6, altitude = 3 V / area(BCD).
        let vol = (b - a).dot((c - a).cross(d - a)).abs() / 6.0;
        let area = (c - b).cross(d - b).norm() / 2.0;
        assert!((h - 3.0 * vol / area).abs() < 1e-15);
        assert!((h - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn line_line_distance_of_skew_cube_edges() {
        let l1 = Line3::through(Vec3::ZERO, Vec3::new(1.0, 1.0, 0.0)).unwrap();
        let l2 = Line3::through(Vec3::new(1.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 1.0)).unwrap();
        assert!((line_line_distance(&l1, &l2) - 1.0).abs() < 1e-15);
        let l3 = Line3::new(Vec3::new(0.0, 0.0, 2.0), Vec3::new(1.0, 1.0, 0.0)).unwrap();
        assert!((line_line_distance(&l1, &l3) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_preserves_norm() {
        let k = Vec3::new(1.0, 2.0, -0.5).try_normalize().unwrap();
        let v = Vec3::new(0.3, -1.0, 4.0);
        let r = rotate(v, k, 1.234);
        assert!((r.norm() - v.norm()).abs() < 1e-14);
        assert!((r.dot(k) - v.dot(k)).abs() < 1e-14);
        let o = any_orthogonal(k);
        assert!(o.dot(k).abs() < 1e-15);
    }
}
