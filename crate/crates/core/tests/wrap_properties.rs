mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use widthcurve::geom::{polyline_length, Plane3, Vec3};
use widthcurve::wrap::{wrap_angles, wrap_curve, wrap_parameters, WrapParams};

fn params() -> impl Strategy<Value = WrapParams> {
    (0.0..0.999f64, 0.0..2.5f64, 0.0..2.5f64, 0.0..3.0f64).prop_map(|(h, du, dv, w)| {
        let floor = (1.0 - h * h).sqrt();
        WrapParams::new(h, floor + du, floor + dv, w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn swapping_endpoints_is_exact(p in params()) {
        let a = wrap_angles(&p).unwrap();
        let b = wrap_angles(&p.swapped()).unwrap();
        prop_assert_eq!(a.length, b.length);
        prop_assert_eq!(a.phi1, b.phi2);
        prop_assert_eq!(a.psi1, b.psi2);
    }

    #[test]
    fn angles_close_to_half_turn(p in params()) {
        let s = wrap_angles(&p).unwrap();
        prop_assert!(s.p >= 0.0);
        prop_assert!((s.phi1 + s.phi2 + s.psi1 + s.psi2 + s.p - PI).abs() < 1e-12);
    }

    #[test]
    fn strictly_increasing_in_w(p in params(), dw in 1e-3..1.0f64) {
        let longer = WrapParams { w: p.w + dw, ..p };
        prop_assert!(wrap_angles(&longer).unwrap().length > wrap_angles(&p).unwrap().length);
    }

    #[test]
    fn never_shorter_than_the_chord(p in params()) {
        let (cyl, e, f) = common::place(&p);
        let tau = Plane3::new(Vec3::ZERO, Vec3::Y).unwrap();
        let recovered = wrap_parameters(&cyl, e, f, &tau).unwrap();
        for (x, y) in [(recovered.h, p.h), (recovered.u, p.u), (recovered.v, p.v), (recovered.w, p.w)] {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let len = wrap_angles(&recovered).unwrap().length;
        prop_assert!(len >= e.distance(f) - 1e-12);
    }
}

#[test]
fn sampled_length_converges_from_below() {
    let tau = Plane3::new(Vec3::ZERO, Vec3::Y).unwrap();
    for p in common::wrap_configs(7, 200) {
        let (cyl, e, f) = common::place(&p);
        let exact = wrap_angles(&p).unwrap().length;
        let mut prev = 0.0;
        for n in [16usize, 64, 256, 1024] {
            let len = polyline_length(&wrap_curve(&cyl, e, f, &tau, n).unwrap());
            assert!(len >= prev - 1e-12, "{p:?} n={n}");
            assert!(len <= exact + 1e-12, "{p:?} n={n}");
            assert!(exact - len <= 10.0 / (n * n) as f64, "{p:?} n={n}");
            prev = len;
        }
    }
}

#[test]
fn rejects_points_inside_the_cylinder() {
    assert!(wrap_angles(&WrapParams::new(0.5, 0.5, 2.0, 1.0)).is_err());
    assert!(wrap_angles(&WrapParams::new(1.0, 2.0, 2.0, 1.0)).is_err());
    assert!(wrap_angles(&WrapParams::new(0.5, 2.0, 2.0, -1.0)).is_err());
}
