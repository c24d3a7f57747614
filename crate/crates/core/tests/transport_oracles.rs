//! Geodesics, log maps, and parallel transport against closed forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use sublab::geometry::{pt, vec_from};
use sublab::scenarios::build_scenario;
use sublab::transport::{
    default_steps, distance_to_curve, integrate_geodesic, log_map, parallel_transport,
    DiscreteCurve,
};

fn scenario(name: &str) -> sublab::scenarios::Scenario {
    build_scenario(name, &BTreeMap::new()).unwrap()
}

#[test]
fn equator_is_a_geodesic() {
    let sc = scenario("sphere");
    let start = pt(&[PI / 2.0, 0.3]);
    let east = vec_from(&[0.0, 1.0]);
    let arc = integrate_geodesic(&sc.total, &start, &east, PI, default_steps(PI)).unwrap();
    let end = arc.end();
    assert!((end[0] - PI / 2.0).abs() < 1e-10, "left the equator: {}", end[0]);
    assert!((end[1] - (0.3 + PI)).abs() < 1e-10, "wrong arc length: {}", end[1]);
}

#[test]
fn log_map_round_trips_on_a_rippled_metric() {
    let sc = scenario("perturbed_torus");
    let m = &sc.total;
    for (a, b) in [((0.4, 1.0), (1.1, 1.9)), ((2.0, 0.3), (2.9, 1.1)), ((5.0, 4.0), (5.8, 3.1))] {
        let x = pt(&[a.0, a.1]);
        let y = pt(&[b.0, b.1]);
        let v = log_map(m, &x, &y, sc.trust_radius).unwrap();
        let distance = m.metric_at(&x).unwrap().norm(&v);
        let back = integrate_geodesic(m, &x, &v, 1.0, default_steps(distance)).unwrap();
        let residual = m.displacement(back.end(), &y).norm();
        assert!(residual < 1e-8, "round trip residual {residual}");
    }
}

#[test]
fn integrator_error_decays_at_fourth_order() {
    let sc = scenario("sphere");
    let m = &sc.total;
    let x = pt(&[1.0, 0.5]);
    let v = vec_from(&[0.4, 0.9]);
    let reference = integrate_geodesic(m, &x, &v, 1.0, 4096).unwrap().end().clone();
    let mut errors = Vec::new();
    for steps in [64usize, 128, 256] {
        let end = integrate_geodesic(m, &x, &v, 1.0, steps).unwrap().end().clone();
        errors.push(m.displacement(&end, &reference).norm());
    }
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(ratio >= 8.0, "step halving only improved by {ratio}");
    }
}

#[test]
fn transport_preserves_inner_products() {
    let sc = scenario("sphere");
    let m = &sc.total;
    // One octant edge: a quarter great circle away from the equator.
    let a = pt(&[PI / 2.0, 0.4]);
    let v = log_map(m, &a, &pt(&[0.955316618124509, 0.4 + PI / 4.0]), sc.trust_radius).unwrap();
    let edge = integrate_geodesic(m, &a, &v, 1.0, 512).unwrap();

    let u = vec_from(&[0.7, -0.3]);
    let w = vec_from(&[0.2, 1.1]);
    let ut = parallel_transport(&edge, &u).unwrap();
    let wt = parallel_transport(&edge, &w).unwrap();
    let before = m.metric_at(&a).unwrap().inner(&u, &w);
    let after = m.metric_at(edge.end()).unwrap().inner(ut.end(), wt.end());
    assert!((after - before).abs() < 1e-8, "inner product drifted {}", after - before);
}

#[test]
fn transport_back_along_the_reversed_curve_returns_the_seed() {
    let sc = scenario("perturbed_torus");
    let m = &sc.total;
    let x = pt(&[1.0, 2.0]);
    let v = vec_from(&[0.8, 0.5]);
    let curve = integrate_geodesic(m, &x, &v, 1.0, 512).unwrap();
    let seed = vec_from(&[1.0, -0.4]);
    let out = parallel_transport(&curve, &seed).unwrap();
    let back = parallel_transport(&curve.reversed(), out.end()).unwrap();
    assert!((back.end() - &seed).norm() < 1e-9, "gap {}", (back.end() - &seed).norm());
}

#[test]
fn distance_to_curve_finds_the_perpendicular_foot() {
    let sc = scenario("plane_curves");
    let line = DiscreteCurve::from_fn(sc.total.clone(), -2.0, 2.0, 256, |t| {
        (pt(&[t, 0.0]), vec_from(&[1.0, 0.0]))
    })
    .unwrap();
    let probe = pt(&[0.7, 1.1]);
    let hit = distance_to_curve(&sc.total, &probe, &line, sc.trust_radius).unwrap();
    assert!((hit.distance - 1.1).abs() < 1e-8, "distance {}", hit.distance);
    assert!((hit.foot_time - 0.7).abs() < 1e-6, "foot {}", hit.foot_time);
}
