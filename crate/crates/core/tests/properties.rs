use std::f64::consts::PI;

use fbcsf_core::billiard::{distance_variations, reflected_distance};
use fbcsf_core::chord_arc::extended_profile;
use fbcsf_core::{flow, initial, ConvexDomain, Point};
use proptest::prelude::*;

fn ellipse_point(a: f64, b: f64, r: f64, u: f64) -> Point {
    Point::new(a * r * u.cos(), b * r * u.sin())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflected_distance_is_symmetric_and_bracketed(
        a in 1.0..3.0f64, b in 0.5..1.5f64,
        r1 in 0.05..0.95f64, u1 in 0.0..2.0 * PI,
        r2 in 0.05..0.95f64, u2 in 0.0..2.0 * PI,
        probe in 0.0..2.0 * PI,
    ) {
        let domain = ConvexDomain::ellipse(a, b).unwrap();
        let (x, y) = (ellipse_point(a, b, r1, u1), ellipse_point(a, b, r2, u2));
        let xy = reflected_distance(&domain, x, y).unwrap();
        let yx = reflected_distance(&domain, y, x).unwrap();
        prop_assert_eq!(xy.distance, yx.distance);
        prop_assert!(xy.distance >= x.dist(y));
        // any boundary point gives an upper bound
        let z = Point::new(a * probe.cos(), b * probe.sin());
        prop_assert!(xy.distance <= x.dist(z) + y.dist(z) + 1e-12);
        prop_assert!((xy.d_x + xy.d_y - xy.distance).abs() <= 1e-12 * xy.distance);
    }

    #[test]
    fn distance_variations_match_central_differences(
        x in (-2.0..2.0f64, -2.0..2.0f64), y in (-2.0..2.0f64, -2.0..2.0f64),
        ax in 0.0..2.0 * PI, ay in 0.0..2.0 * PI,
    ) {
        let (x, y) = (Point::new(x.0, x.1), Point::new(y.0, y.1));
        prop_assume!(x.dist(y) > 0.1);
        let (dx_dir, dy_dir) = (Point::polar(ax), Point::polar(ay));
        let v = distance_variations(x, y, dx_dir, dy_dir).unwrap();
        let eps = 1e-6;
        let fd_x = ((x + dx_dir * eps).dist(y) - (x - dx_dir * eps).dist(y)) / (2.0 * eps);
        let fd_y = (x.dist(y + dy_dir * eps) - x.dist(y - dy_dir * eps)) / (2.0 * eps);
        prop_assert!((v.dx - fd_x).abs() < 1e-7, "dx {} vs {}", v.dx, fd_x);
        prop_assert!((v.dy - fd_y).abs() < 1e-7, "dy {} vs {}", v.dy, fd_y);
        let h = 1e-4;
        let fd_xx = ((x + dx_dir * h).dist(y) - 2.0 * x.dist(y) + (x - dx_dir * h).dist(y)) / (h * h);
        prop_assert!((v.dxx - fd_xx).abs() < 1e-4 * (1.0 + fd_xx.abs()));
    }

    #[test]
    fn step_does_not_depend_on_vertex_order(amp in -0.3..0.3f64, k in 1usize..4) {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&disk, 2.5, 0.3, 40, |t| amp * (k as f64 * PI * t).sin()).unwrap();
        let dt = 0.5 * flow::cfl_dt(&c, 0.2);
        let (forward, _) = flow::step(&c, &disk, dt, 0.2).unwrap();
        let (backward, _) = flow::step(&c.reversed(), &disk, dt, 0.2).unwrap();
        for (p, q) in forward.vertices().iter().zip(backward.vertices().iter().rev()) {
            prop_assert!(p.dist(*q) < 1e-13);
        }
    }

    #[test]
    fn step_commutes_with_parabolic_scaling(lambda in 0.2..5.0f64, amp in -0.3..0.3f64) {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let big = ConvexDomain::disk(lambda).unwrap();
        let c = initial::perturbed_chord(&disk, 2.0, 0.1, 30, |t| amp * (PI * t).sin()).unwrap();
        let scaled = initial::perturbed_chord(&big, 2.0 * lambda, 0.1 * lambda, 30, |t| lambda * amp * (PI * t).sin()).unwrap();
        let dt = 0.5 * flow::cfl_dt(&c, 0.2);
        let (a, _) = flow::step(&c, &disk, dt, 0.2).unwrap();
        let (b, _) = flow::step(&scaled, &big, dt * lambda * lambda, 0.2).unwrap();
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!((*p * lambda).dist(*q) < 1e-11 * lambda);
        }
    }

    #[test]
    fn remesh_never_lengthens(amp in -0.4..0.4f64, k in 1usize..5, edges in 8usize..120) {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&disk, PI, 0.0, 60, |t| amp * (k as f64 * PI * t).sin()).unwrap();
        let r = flow::remesh(&c, &disk, edges).unwrap();
        prop_assert_eq!(r.edge_lengths().len(), edges);
        prop_assert!(r.length() <= c.length() * (1.0 + 1e-12));
    }

    #[test]
    fn profile_never_exceeds_arclength(amp in -0.4..0.4f64, k in 1usize..4) {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&disk, PI, 0.0, 40, |t| amp * (k as f64 * PI * t).sin()).unwrap();
        let report = extended_profile(&c, &disk, 16, None).unwrap();
        for bin in report.bins.iter().filter(|b| b.psi.is_finite()) {
            prop_assert!(bin.psi <= bin.delta * (1.0 + 1e-12));
            prop_assert!(bin.delta >= bin.lo && bin.delta <= bin.hi + 1e-12);
        }
    }

    #[test]
    fn rotation_keeps_length_and_is_orthogonal(x in -10.0..10.0f64, y in -10.0..10.0f64) {
        let v = Point::new(x, y);
        prop_assert_eq!(v.rot90().dot(v), 0.0);
        prop_assert_eq!(v.rot90().norm_sq(), v.norm_sq());
        prop_assert_eq!(v.rot90().rot90(), -v);
    }
}
