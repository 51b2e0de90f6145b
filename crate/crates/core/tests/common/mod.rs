#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use widthcurve::family::validate_params;
use widthcurve::geom::rotate;
use widthcurve::wrap::{wrap_angles, CylinderZ, WrapParams};
use widthcurve::{CurveKind, CurveSpec, Point3, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `(h, u, v, w)` accepted by `wrap_angles`.
pub fn wrap_configs(seed: u64, count: usize) -> Vec<WrapParams> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let h: f64 = rng.gen_range(0.0..0.999);
        let floor = (1.0 - h * h).sqrt();
        let u = rng.gen_range(floor..floor + 2.5);
        let v = rng.gen_range(floor..floor + 2.5);
        let w = rng.gen_range(0.0..3.0);
        let p = WrapParams::new(h, u, v, w);
        if wrap_angles(&p).is_ok() {
            out.push(p);
        }
    }
    out
}

/// Endpoints realizing `p` around the unit cylinder on the z axis, with the
/// reference plane `y = 0`.
pub fn place(p: &WrapParams) -> (CylinderZ, Point3, Point3) {
    let cyl = CylinderZ::unit(widthcurve::geom::Line3::new(Vec3::ZERO, Vec3::Z).unwrap());
    (cyl, Vec3::new(-p.u, p.h, 0.0), Vec3::new(p.v, p.h, p.w))
}

/// Admissible `(a, b, c)` whose open curves can be built.
pub fn admissible_triples(seed: u64, count: usize) -> Vec<[f64; 3]> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = [
            rng.gen_range(0.6..0.95),
            rng.gen_range(0.0..0.2),
            rng.gen_range(0.6..0.99),
        ];
        if !validate_params(x[0], x[1], x[2]).is_empty() {
            continue;
        }
        let ok = [CurveKind::L2, CurveKind::L3].iter().all(|&k| {
            CurveSpec::new(k, Some(x))
                .and_then(|s| s.closed_form_length())
                .is_ok()
        });
        if ok {
            out.push(x);
        }
    }
    out
}

/// Random rotation and translation.
pub fn rigid_motion(rng: &mut ChaCha8Rng) -> impl Fn(Point3) -> Point3 {
    let axis = loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if let Some(u) = v.try_normalize() {
            break u;
        }
    };
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let shift = Vec3::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
    );
    move |p| rotate(p, axis, angle) + shift
}

pub fn diameter(points: &[Point3]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.distance(*q));
        }
    }
    best
}
