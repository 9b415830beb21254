use std::f64::consts::{FRAC_PI_4, PI, TAU};

use approx::assert_relative_eq;

use super::*;

fn hyp(k1: f64) -> SpaceForm {
    SpaceForm::hyperbolic(k1).unwrap()
}

fn sph(k1: f64) -> SpaceForm {
    SpaceForm::sphere(k1).unwrap()
}

#[test]
fn flat_unit_circle() {
    let sp = SpaceForm::flat();
    let c = make_circle(&sp, &ModelPoint::planar(0.3, -0.2), 1.0, &Sampling::fixed(1024)).unwrap();
    c.check_invariants().unwrap();
    assert_relative_eq!(c.total_length, TAU, max_relative = 1e-14);
    for s in &c.samples {
        assert!((s.kappa - 1.0).abs() < 1e-9, "{}", s.kappa);
    }
    assert!(c.max_gap() < TAU / 1000.0);
}

#[test]
fn hyperbolic_circle_length_and_curvature() {
    let sp = hyp(1.0);
    let r = 0.5f64.atanh();
    let c = make_circle(&sp, &sp.chart_point(0.2, 0.1), 2.0, &Sampling::fixed(2048)).unwrap();
    c.check_invariants().unwrap();
    assert_relative_eq!(c.total_length, TAU * r.sinh(), max_relative = 1e-13);
    assert!((c.kmin - 2.0).abs() < 1e-8, "{}", c.kmin);
    let polyline: f64 =
        (0..c.len()).map(|i| sp.distance(&c.samples[i].point, &c.samples[(i + 1) % c.len()].point).unwrap()).sum();
    assert_relative_eq!(polyline, c.total_length, max_relative = 1e-6);
}

#[test]
fn spherical_circle_curvature() {
    let sp = sph(1.0);
    let c = make_circle(&sp, &sp.origin(), 1.0, &Sampling::fixed(2048)).unwrap();
    c.check_invariants().unwrap();
    assert_relative_eq!(c.total_length, TAU * FRAC_PI_4.sin(), max_relative = 1e-13);
    assert!((c.kmin - 1.0).abs() < 1e-8, "{}", c.kmin);
    let d = c.distances_from(&sp.origin());
    assert!(d.iter().all(|t| (t - FRAC_PI_4).abs() < 1e-14));
}

#[test]
fn great_circle_has_zero_curvature() {
    let sp = sph(2.0);
    let c = make_circle(&sp, &sp.origin(), 0.0, &Sampling::fixed(512)).unwrap();
    assert!(c.kmin.abs() < 1e-8);
}

#[test]
fn flat_lune_geometry() {
    let sp = SpaceForm::flat();
    let r = 1.0 / (2.0 + 2f64.sqrt());
    let c = make_lune(&sp, 1.0, r, &Sampling::fixed(2048)).unwrap();
    c.check_invariants().unwrap();
    assert_eq!(c.corner_count(), 2);
    let o = sp.origin();
    let (h, _) = c.min_distance(&o);
    let (rho, _) = c.max_distance(&o);
    assert!((h - r).abs() < 1e-12, "{h}");
    assert!((rho - (2.0 * r - r * r).sqrt()).abs() < 1e-12, "{rho}");
    assert!((c.kmin - 1.0).abs() < 1e-8);
    let corner = c.samples.iter().position(|s| s.corner).unwrap();
    assert_eq!(c.measure_curvature(corner), Err(GeomError::Corner { index: corner }));
}

#[test]
fn curved_lunes_have_expected_half_width() {
    for (sp, k0) in [(sph(1.0), 1.0), (hyp(1.0), 2.0)] {
        let big_r = sp.circle_radius_of_curvature(k0).unwrap();
        let r = 0.3 * big_r;
        let c = make_lune(&sp, k0, r, &Sampling::fixed(2048)).unwrap();
        c.check_invariants().unwrap();
        let (h, _) = c.min_distance(&sp.origin());
        let (rho, _) = c.max_distance(&sp.origin());
        assert!((h - r).abs() < 1e-12);
        let expect = sp.right_triangle_leg(big_r, big_r - r).unwrap();
        assert!((rho - expect).abs() < 1e-12, "{rho} {expect}");
    }
}

#[test]
fn triple_disc_intersection() {
    let sp = hyp(0.5);
    let centers: Vec<ModelPoint> = (0..3)
        .map(|k| {
            let a = TAU * k as f64 / 3.0 + 0.1;
            sp.chart_point(0.4 * a.cos(), 0.4 * a.sin())
        })
        .collect();
    let c = make_disc_intersection(&sp, &centers, 1.5, &Sampling::fixed(3000)).unwrap();
    c.check_invariants().unwrap();
    assert_eq!(c.corner_count(), 3);
    assert!((c.kmin - 1.5).abs() < 1e-8);
    let r = sp.circle_radius_of_curvature(1.5).unwrap();
    for s in &c.samples {
        for z in &centers {
            assert!(sp.distance(&s.point, z).unwrap() <= r * (1.0 + 1e-12));
        }
    }
}

#[test]
fn coincident_centers_give_circle() {
    let sp = SpaceForm::flat();
    let p = ModelPoint::planar(1.0, 1.0);
    let c = make_disc_intersection(&sp, &[p, p], 2.0, &Sampling::fixed(256)).unwrap();
    assert_eq!(c.corner_count(), 0);
    assert_relative_eq!(c.total_length, PI, max_relative = 1e-14);
}

#[test]
fn far_apart_discs_fail() {
    let sp = SpaceForm::flat();
    let r = make_disc_intersection(
        &sp,
        &[ModelPoint::planar(0.0, 0.0), ModelPoint::planar(3.0, 0.0)],
        1.0,
        &Sampling::fixed(256),
    );
    assert!(matches!(r, Err(GeomError::Domain(_))));
}

#[test]
fn support_function_rejection_reports_theta() {
    let f = SupportFunction { a0: 1.0, harmonics: vec![Harmonic { n: 2, a: 0.4, b: 0.0 }] };
    match make_support_curve(&f, 0.5, &Sampling::fixed(512)) {
        Err(GeomError::Rejected { theta, .. }) => assert!(theta.cos().abs() > 0.9, "{theta}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn support_function_curve() {
    let f = SupportFunction { a0: 1.0, harmonics: vec![Harmonic { n: 3, a: 0.05, b: -0.02 }] };
    let k0 = 1.0 / (1.0 + 8.0 * 0.05f64.hypot(0.02)) - 1e-6;
    let c = make_support_curve(&f, k0, &Sampling::fixed(4096)).unwrap();
    c.check_invariants().unwrap();
    assert_relative_eq!(c.total_length, TAU, max_relative = 1e-14);
    for (i, s) in c.samples.iter().enumerate().step_by(97) {
        let t = s.normal_out[1].atan2(s.normal_out[0]);
        assert!((s.kappa - 1.0 / f.rho(t)).abs() < 1e-8, "sample {i}");
    }
    let polyline: f64 = (0..c.len()).map(|i| sp_dist(&c.samples[i].point, &c.samples[(i + 1) % c.len()].point)).sum();
    assert_relative_eq!(polyline, TAU, max_relative = 1e-6);
}

fn sp_dist(a: &ModelPoint, b: &ModelPoint) -> f64 {
    SpaceForm::flat().distance(a, b).unwrap()
}

#[test]
fn frame_ode_constant_profile_is_circle() {
    for (sp, k) in [(SpaceForm::flat(), 1.0), (sph(1.0), 0.5), (hyp(1.0), 2.0)] {
        let c = make_frame_ode_curve(&sp, &FourierProfile::constant(k), &Sampling::fixed(1024)).unwrap();
        let r = sp.circle_radius_of_curvature(k).unwrap();
        assert_relative_eq!(c.total_length, sp.circle_length(r), max_relative = 1e-10);
        assert!((c.kmin - k).abs() < 1e-8);
        c.check_invariants().unwrap();
    }
}

#[test]
fn frame_ode_follows_profile() {
    let prof = FourierProfile { mean: 2.0, harmonics: vec![Harmonic { n: 3, a: 0.3, b: 0.1 }] };
    for sp in [SpaceForm::flat(), sph(1.0), hyp(1.0)] {
        let c = make_frame_ode_curve(&sp, &prof, &Sampling::fixed(2048)).unwrap();
        c.check_invariants().unwrap();
        for (i, s) in c.samples.iter().enumerate().step_by(61) {
            let u = s.s / c.total_length;
            assert!((s.kappa - prof.eval(u)).abs() < 1e-7, "{:?} sample {i}", sp.kind());
        }
        assert!((c.kmin - prof.min_value()).abs() < 1e-6);
    }
}

#[test]
fn frame_ode_needs_symmetry() {
    let prof = FourierProfile { mean: 2.0, harmonics: vec![Harmonic { n: 1, a: 0.3, b: 0.0 }] };
    assert!(matches!(
        make_frame_ode_curve(&SpaceForm::flat(), &prof, &Sampling::fixed(256)),
        Err(GeomError::Domain(_))
    ));
    let slow = FourierProfile::constant(0.5);
    assert!(make_frame_ode_curve(&hyp(1.0), &slow, &Sampling::fixed(256)).is_err());
}

#[test]
fn radial_angle_of_offset_circle() {
    let sp = SpaceForm::flat();
    let c = make_circle(&sp, &ModelPoint::planar(0.7, 0.0), 1.0, &Sampling::fixed(4096)).unwrap();
    let m = measure_radial(&c, &sp.origin()).unwrap();
    assert!((m.h - 0.3).abs() < 1e-12);
    assert!((m.max_phi() - 0.7f64.asin()).abs() < 1e-6);
    assert!(measure_radial(&c, &ModelPoint::planar(3.0, 0.0)).is_err());
}

#[test]
fn radial_sphere_hemisphere_guard() {
    let sp = sph(1.0);
    let c = make_circle(&sp, &sp.chart_point(0.8, 0.0), 0.0, &Sampling::fixed(512)).unwrap();
    assert!(matches!(measure_radial(&c, &sp.origin()), Err(GeomError::Hypothesis(_))));
}

#[test]
fn json_round_trip() {
    for sp in [SpaceForm::flat(), sph(1.0), hyp(2.0)] {
        let k0 = if sp.kind() == SpaceKind::Hyperbolic { 3.0 } else { 1.5 };
        let c = make_lune(&sp, k0, 0.2, &Sampling::fixed(256)).unwrap();
        let text = c.to_json();
        let back = ClosedCurve::from_json(&text).unwrap();
        assert_eq!(back, c);
        let file: serde_json::Value = serde_json::from_str(&text).unwrap();
        let dim = file["samples"][0]["coords"].as_array().unwrap().len();
        assert_eq!(dim, if sp.kind() == SpaceKind::Flat { 2 } else { 3 });
    }
    assert!(matches!(ClosedCurve::from_json("{"), Err(GeomError::Parse(_))));
}

#[test]
fn adaptive_sampling_stops_when_consistent() {
    let sp = SpaceForm::flat();
    let s = Sampling { samples: 512, max_samples: 8192, consistency: 1e-7 };
    let c = make_circle(&sp, &sp.origin(), 1.0, &s).unwrap();
    assert_eq!(c.len(), 512);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn lunes_are_valid(kind in 0usize..3, frac in 0.05f64..0.95, k0s in 1.1f64..3.0) {
            let sp = [SpaceForm::flat(), sph(1.0), hyp(1.0)][kind];
            let big_r = sp.circle_radius_of_curvature(k0s).unwrap();
            let c = make_lune(&sp, k0s, frac * big_r, &Sampling::fixed(2048)).unwrap();
            prop_assert!(c.check_invariants().is_ok());
            prop_assert!(c.kmin >= k0s - 1e-6);
        }

        #[test]
        fn random_disc_intersections(seed in proptest::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 2..6)) {
            let sp = hyp(1.0);
            let centers: Vec<ModelPoint> = seed.iter().map(|(x, y)| sp.chart_point(*x, *y)).collect();
            let c = make_disc_intersection(&sp, &centers, 1.6, &Sampling::fixed(1024)).unwrap();
            prop_assert!(c.check_invariants().is_ok());
            prop_assert!(c.kmin >= 1.6 - 1e-6);
        }
    }
}
