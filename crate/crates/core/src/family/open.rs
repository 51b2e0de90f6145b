//! The open curves: the cube polygon `L1` and the three-parameter families
//! `L2(a,b,c)` (three wraps) and `L3(a,b,c)` (polygonal end parts).

use serde::{Deserialize, Serialize};

use super::params::{anchor_frame, slab_metrics, tau_frame, AnchorFrame, ParamTriple, TauFrame};
use super::{cube_tetrahedron, mirror_z};
use crate::error::{Error, Result};
use crate::geom::{Plane3, Point3, Polyline3, Vec3};
use crate::wrap::{wrap_angles, wrap_angles_relaxed, Wrap, WrapParams, WrapSolution};

/// `L1 = ABCD` over alternate corners of the unit cube.
pub fn build_l1() -> Polyline3 {
    Polyline3::open(cube_tetrahedron().to_vec()).expect("distinct cube corners")
}

/// Cross-section parameters of the middle part `BC` around the cylinder on `AD`.
pub fn middle_wrap_params(p: &ParamTriple) -> WrapParams {
    WrapParams::new(p.c, p.t, p.t, 2.0 * p.b)
}

/// Cross-section parameters of the end part `AB` around the cylinder on `DC`.
pub fn end_wrap_params(p: &ParamTriple) -> Result<WrapParams> {
    let frame = anchor_frame(p)?;
    let tf = tau_frame(&frame)?;
    Ok(WrapParams::new(slab_metrics(&frame).d, tf.u0, tf.v0, tf.w0))
}

/// Closed-form length of `L2(a,b,c)`: two end wraps plus the middle wrap.
pub fn length_l2(p: &ParamTriple) -> Result<f64> {
    let end = wrap_angles(&end_wrap_params(p)?)?;
    let mid = wrap_angles(&middle_wrap_params(p))?;
    Ok(2.0 * end.length + mid.length)
}

/// Shortest three-link path `A M N B` over the box left after truncating the
/// cylinder on `DC`, together with the points `M` and `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L3Chord {
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub ell3: f64,
    /// Half the top side of the box, `DM'' = DN''`.
    pub dm: f64,
    pub m: Point3,
    pub n: Point3,
}

fn chord_lengths(d: f64, u0: f64, v0: f64, w0: f64) -> (f64, f64, f64, f64) {
    let q = (3.0 - 2.0 * d - d * d).max(0.0).sqrt();
    let lift = 0.5 * (1.0 - d);
    let q1 = lift.hypot(u0 - 0.5 * q);
    let q2 = lift.hypot(v0 - 0.5 * q);
    (q, q1, q2, (q1 + q + q2).hypot(w0))
}

pub fn l3_chord(p: &ParamTriple) -> Result<L3Chord> {
    let frame = anchor_frame(p)?;
    let tf = tau_frame(&frame)?;
    let d = slab_metrics(&frame).d;
    if 3.0 - 2.0 * d - d * d <= 0.0 {
        return Err(Error::Domain(format!("slab distance d = {d} not below 1")));
    }
    let (q, q1, q2, ell3) = chord_lengths(d, tf.u0, tf.v0, tf.w0);
    let (m, n) = chord_points(&frame, &tf, d, q, q1, q2);
    Ok(L3Chord {
        q,
        q1,
        q2,
        ell3,
        dm: 0.5 * q,
        m,
        n,
    })
}

/// `M` and `N` from their expansions in the basis `(r, DC, nu)`.
fn chord_points(
    frame: &AnchorFrame,
    tf: &TauFrame,
    d: f64,
    q: f64,
    q1: f64,
    q2: f64,
) -> (Point3, Point3) {
    let r_hat = tf.r / tf.r.norm();
    let dc = frame.c - frame.d;
    let dc_hat = dc / dc.norm();
    let nu_hat = tf.nu / tf.nu.norm();
    let total = q1 + q + q2;
    let lift = nu_hat * (0.5 * (1.0 - d));
    let am = -r_hat * (tf.u0 - 0.5 * q) - dc_hat * (tf.w0 * q1 / total) + lift;
    let bn = r_hat * (tf.v0 - 0.5 * q) + dc_hat * (tf.w0 * q2 / total) + lift;
    (frame.a + am, frame.b + bn)
}

pub fn length_l3(p: &ParamTriple) -> Result<f64> {
    let chord = l3_chord(p)?;
    let mid = wrap_angles(&middle_wrap_params(p))?;
    Ok(2.0 * chord.ell3 + mid.length)
}

/// Lengths of `L2` and `L3` with all radicands clamped, defined for any finite
/// `a > 1/2`, `c > 0`. Agrees with [`length_l2`] and [`length_l3`] on the
/// admissible domain.
pub(crate) fn relaxed_lengths(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if !(a > 0.5 && c > 0.0) || !b.is_finite() || !a.is_finite() || !c.is_finite() {
        return None;
    }
    let p = ParamTriple::unchecked(a, b, c);
    let frame = anchor_frame(&p).ok()?;
    let tf = tau_frame(&frame).ok()?;
    let d = slab_metrics(&frame).d;
    let mid = wrap_angles_relaxed(&middle_wrap_params(&p)).length;
    let end = wrap_angles_relaxed(&WrapParams::new(d, tf.u0, tf.v0, tf.w0)).length;
    let (_, _, _, ell3) = chord_lengths(d, tf.u0, tf.v0, tf.w0);
    let out = (2.0 * end + mid, 2.0 * ell3 + mid);
    (out.0.is_finite() && out.1.is_finite()).then_some(out)
}

/// Planar angles `DM'A` and `DN'B` in the cross-section through `D`.
pub fn angle_check_l3(p: &ParamTriple) -> Result<(f64, f64)> {
    let frame = anchor_frame(p)?;
    let tf = tau_frame(&frame)?;
    let d = slab_metrics(&frame).d;
    let q = (3.0 - 2.0 * d - d * d).max(0.0).sqrt();
    let top = 0.5 * (1.0 + d);
    let angle = |corner: (f64, f64), end: (f64, f64)| {
        let to_d = (-corner.0, -corner.1);
        let to_end = (end.0 - corner.0, end.1 - corner.1);
        let cross = to_d.0 * to_end.1 - to_d.1 * to_end.0;
        let dot = to_d.0 * to_end.0 + to_d.1 * to_end.1;
        cross.abs().atan2(dot)
    };
    Ok((
        angle((0.5 * q, top), (tf.u0, d)),
        angle((-0.5 * q, top), (-tf.v0, d)),
    ))
}

/// Middle part: wrap `B -> C` around the cylinder on `AD`, reference plane `z = 0`.
fn middle_wrap(frame: &AnchorFrame) -> Result<Wrap> {
    let ground = Plane3::new(Vec3::ZERO, Vec3::Z)?;
    Wrap::new(&frame.z2, frame.b, frame.c, &ground)
}

/// End part of `L2`: wrap `A -> B` around the cylinder on `DC`, plane `tau`.
fn end_wrap(frame: &AnchorFrame) -> Result<Wrap> {
    let tf = tau_frame(frame)?;
    Wrap::new(&frame.z3, frame.a, frame.b, &tf.plane)
}

/// The end wrap (`A -> B`) and middle wrap (`B -> C`) of `L2`, placed in space.
pub fn l2_wraps(p: &ParamTriple) -> Result<(Wrap, Wrap)> {
    let frame = anchor_frame(p)?;
    Ok((end_wrap(&frame)?, middle_wrap(&frame)?))
}

pub fn middle_solution(p: &ParamTriple) -> Result<WrapSolution> {
    wrap_angles(&middle_wrap_params(p))
}

/// Appends `part` to `out`, skipping its first point (shared with the previous part).
fn append_joined(out: &mut Vec<Point3>, part: impl IntoIterator<Item = Point3>) {
    out.extend(part.into_iter().skip(1));
}

/// Completes a curve whose first half ends at `C` by the mirrored start.
fn close_with_mirror(mut pts: Vec<Point3>, first_part: &[Point3]) -> Vec<Point3> {
    append_joined(&mut pts, first_part.iter().rev().map(|&q| mirror_z(q)));
    pts
}

pub fn build_l2(p: &ParamTriple, n_arc: usize) -> Result<Polyline3> {
    let (end, mid) = l2_wraps(p)?;
    let first = end.sample(n_arc)?;
    let mut pts = first.clone();
    append_joined(&mut pts, mid.sample(n_arc)?);
    Polyline3::open(close_with_mirror(pts, &first))
}

pub fn build_l3(p: &ParamTriple, n_arc: usize) -> Result<Polyline3> {
    let frame = anchor_frame(p)?;
    let chord = l3_chord(p)?;
    let first = [frame.a, chord.m, chord.n, frame.b];
    let mut pts = first.to_vec();
    append_joined(&mut pts, middle_wrap(&frame)?.sample(n_arc)?);
    Polyline3::open(close_with_mirror(pts, &first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{L2_PUBLISHED, L3_PUBLISHED};
    use crate::geom::{point_line_distance, polyline_length, Line3};
    use crate::wrap::wrap_parameters;
    use std::f64::consts::FRAC_PI_2;

    fn p3() -> ParamTriple {
        ParamTriple::try_from(L3_PUBLISHED).unwrap()
    }

    fn p2() -> ParamTriple {
        ParamTriple::try_from(L2_PUBLISHED).unwrap()
    }

    #[test]
    fn l1_length() {
        let l1 = build_l1();
        assert!((polyline_length(&l1) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn l2_length_at_published_optimum() {
        let l = length_l2(&p2()).unwrap();
        assert!((l - 3.934255).abs() < 5e-6, "{l}");
        assert!(length_l2(&p3()).unwrap() > length_l3(&p3()).unwrap());
        assert!(length_l3(&p2()).unwrap() < l);
    }

    #[test]
    fn l3_table_values() {
        let c = l3_chord(&p3()).unwrap();
        assert!((c.q1 - 0.444661).abs() < 5e-6);
        assert!((c.q - 0.620578).abs() < 5e-6);
        assert!((c.q2 - 0.200019).abs() < 5e-6);
        assert!((c.ell3 - 1.305735).abs() < 5e-6);
        assert!((length_l3(&p3()).unwrap() - 3.921545).abs() < 5e-6);
        let m = [0.500044, -0.253125, 0.279697];
        let n = [0.092710, -0.552260, 0.673078];
        for i in 0..3 {
            assert!((c.m[i] - m[i]).abs() < 5e-6);
            assert!((c.n[i] - n[i]).abs() < 5e-6);
        }
    }

    #[test]
    fn chord_points_lift_off_tau() {
        let p = p3();
        let frame = anchor_frame(&p).unwrap();
        let tf = tau_frame(&frame).unwrap();
        let d = slab_metrics(&frame).d;
        let c = l3_chord(&p).unwrap();
        let nu_hat = tf.nu / tf.nu.norm();
        // M and N sit at height (1 + d)/2 above tau, i.e. (1 - d)/2 above A and B
        assert!(((c.m - frame.a).dot(nu_hat) - 0.5 * (1.0 - d)).abs() < 1e-12);
        assert!(((c.n - frame.b).dot(nu_hat) - 0.5 * (1.0 - d)).abs() < 1e-12);
        // and on the surface of the unit cylinder on DC
        let dc = Line3::through(frame.d, frame.c).unwrap();
        assert!((point_line_distance(c.m, &dc) - 1.0).abs() < 1e-12);
        assert!((point_line_distance(c.n, &dc) - 1.0).abs() < 1e-12);
        // the link lengths are the chord pieces
        assert!(((c.m - frame.a).norm() - c.ell3 * c.q1 / (c.q1 + c.q + c.q2)).abs() < 1e-12);
        assert!(((c.n - c.m).norm() - c.ell3 * c.q / (c.q1 + c.q + c.q2)).abs() < 1e-12);
    }

    #[test]
    fn d_near_one_limit() {
        let d = 1.0 - 1e-6;
        let (q, ..) = chord_lengths(d, 0.7, 0.5, 0.3);
        assert!(q < 2e-3);
    }

    #[test]
    fn placed_wraps_match_closed_forms() {
        for p in [p2(), p3()] {
            let frame = anchor_frame(&p).unwrap();
            let tf = tau_frame(&frame).unwrap();
            let got = wrap_parameters(&frame.z3, frame.a, frame.b, &tf.plane).unwrap();
            let want = end_wrap_params(&p).unwrap();
            assert!((got.h - want.h).abs() < 1e-12);
            assert!((got.u - want.u).abs() < 1e-12);
            assert!((got.v - want.v).abs() < 1e-12);
            assert!((got.w - want.w).abs() < 1e-12);
            let got = middle_wrap(&frame).unwrap();
            let want = middle_wrap_params(&p);
            assert!((got.params().h - want.h).abs() < 1e-12);
            assert!((got.params().u - want.u).abs() < 1e-12);
            assert!((got.params().v - want.v).abs() < 1e-12);
            assert!((got.params().w - want.w).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_curves_approach_closed_forms() {
        let p = p3();
        let l3 = polyline_length(&build_l3(&p, 2048).unwrap());
        assert!((l3 - 3.921545).abs() < 1e-5);
        let exact = length_l2(&p).unwrap();
        let mut prev = 0.0;
        for n in [16, 64, 256, 1024] {
            let l = polyline_length(&build_l2(&p, n).unwrap());
            assert!(l > prev && l < exact);
            prev = l;
        }
        assert!(exact - prev < 1e-5);
        let q = ParamTriple::new(0.6, 0.1, 0.9).unwrap();
        let sampled = polyline_length(&build_l2(&q, 4096).unwrap());
        assert!((sampled - length_l2(&q).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn mirror_symmetry() {
        for poly in [build_l2(&p3(), 64).unwrap(), build_l3(&p3(), 64).unwrap()] {
            let pts = poly.points();
            let n = pts.len();
            for i in 0..n {
                assert!((mirror_z(pts[i]) - pts[n - 1 - i]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn obtuse_angles_at_optimum() {
        let (dma, dnb) = angle_check_l3(&p3()).unwrap();
        assert!(dma > FRAC_PI_2 && dnb > FRAC_PI_2);
        // independent route: the same angles from 3D points projected along DC
        let p = p3();
        let frame = anchor_frame(&p).unwrap();
        let c = l3_chord(&p).unwrap();
        let dc = (frame.c - frame.d) / (frame.c - frame.d).norm();
        let flat = |v: Vec3| v - dc * v.dot(dc);
        let ang = |corner: Point3, end: Point3| {
            let x = flat(frame.d - corner);
            let y = flat(end - corner);
            (x.dot(y) / (x.norm() * y.norm())).acos()
        };
        assert!((ang(c.m, frame.a) - dma).abs() < 1e-9);
        assert!((ang(c.n, frame.b) - dnb).abs() < 1e-9);
    }

    #[test]
    fn relaxed_matches_strict_when_admissible() {
        for p in [p2(), p3(), ParamTriple::new(0.6, 0.1, 0.9).unwrap()] {
            let (l2, l3) = relaxed_lengths(p.a, p.b, p.c).unwrap();
            assert_eq!(l2, length_l2(&p).unwrap());
            assert_eq!(l3, length_l3(&p).unwrap());
        }
        assert!(relaxed_lengths(0.5, 0.1, 0.9).is_none());
        assert!(relaxed_lengths(0.7, 0.1, -0.1).is_none());
    }
}
