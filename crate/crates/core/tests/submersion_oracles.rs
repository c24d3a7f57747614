//! Submersion tensors and sampled checks against closed forms.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use sublab::geometry::pt;
use sublab::scenarios::build_scenario;
use sublab::submersion::{dihedral_angle, gha_check, MetricSample};

fn scenario(name: &str) -> sublab::scenarios::Scenario {
    build_scenario(name, &BTreeMap::new()).unwrap()
}

#[test]
fn warped_bending_matches_the_profile_log_derivative() {
    let sc = scenario("warped_product");
    let b = sc.params["b"];
    for &r in &[-0.7, -0.3, 0.0, 0.25, 0.6] {
        let x = pt(&[r, 2.0]);
        let measured = sc.f1.second_fundamental_form_at(&x).unwrap().norm;
        let expected = (2.0 * b * r / (1.0 + b * r * r)).abs();
        assert!((measured - expected).abs() < 1e-6, "r={r}: {measured} vs {expected}");
    }
}

#[test]
fn twisted_distortion_matches_the_twist_log_derivative() {
    let sc = scenario("flat_torus_pair");
    let a = sc.params["a"];
    for &t in &[0.0, 0.8, 1.7, 2.9, PI, 4.5] {
        let x = pt(&[0.3, t]);
        let measured = sc.f2.distortion_at(&x).unwrap().delta;
        let expected = (1.0 + a * t.cos()).ln().abs();
        assert!((measured - expected).abs() < 1e-9, "θ₂={t}: {measured} vs {expected}");
    }
}

#[test]
fn fibration_has_bracket_norm_two_without_bending() {
    let sc = scenario("hopf");
    for x in sc.sample_grid(8) {
        assert!(sc.f1.second_fundamental_form_at(&x).unwrap().norm < 1e-5);
        let a = sc.f1.integrability_tensor_at(&x).unwrap().norm;
        assert!((a - 2.0).abs() < 1e-4, "|A| = {a}");
    }
}

#[test]
fn map_distance_of_the_twisted_pair_is_the_amplitude() {
    let sc = scenario("flat_torus_pair");
    let grid = sc.sample_grid(256);
    let forward = sc.f1.map_distance(&sc.f2, &grid, sc.trust_radius).unwrap();
    let backward = sc.f2.map_distance(&sc.f1, &grid, sc.trust_radius).unwrap();
    assert!((forward.value - sc.params["a"]).abs() < 1e-9, "{}", forward.value);
    assert_eq!(forward.value, backward.value, "map distance must be symmetric");
}

#[test]
fn orthogonal_circle_factors_meet_at_a_right_angle() {
    let sc = scenario("torus3_orthogonal");
    let x = pt(&[0.5, 1.0, 1.5]);
    let v1 = sc.f1.split_at(&x).unwrap().vertical;
    let v2 = sc.f2.split_at(&x).unwrap().vertical;
    let angle = dihedral_angle(&sc.total, &x, &v1, &v2).unwrap();
    assert!((angle - FRAC_PI_2).abs() < 1e-10, "angle {angle}");
}

#[test]
fn local_control_refutes_an_undersized_factor() {
    let sc = scenario("flat_torus_pair");
    let x = pt(&[1.0, 1.0]);
    let generous = sc.f2.lcl_check(1.5, &x, 0.4, 200, sc.trust_radius, 11).unwrap();
    assert!(generous.pass, "forward margin {}", generous.forward_margin);

    // The twist stretches up to 1 + a = 1.3 > 1.05 near θ₂ = 0.
    let tight = sc.f2.lcl_check(1.05, &x, 0.4, 200, sc.trust_radius, 11).unwrap();
    assert!(!tight.pass);
    assert!(tight.witness.is_some(), "a refutation must carry a witness");
}

#[test]
fn identity_correspondence_is_an_exact_match() {
    let sc = scenario("flat_torus_pair");
    let mut points = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            points.push(pt(&[0.5 + 0.4 * i as f64, 0.8 + 0.4 * j as f64]));
        }
    }
    let sample = MetricSample::from_chart(&sc.total, points, sc.trust_radius).unwrap();
    let identity: Vec<(usize, usize)> = (0..sample.len()).map(|i| (i, i)).collect();
    let report = gha_check(&sample, &sample, &identity, 1e-9).unwrap();
    assert!(report.pass);
    assert_eq!(report.worst_distortion, 0.0);
    assert_eq!(report.density_gap, 0.0);
}
