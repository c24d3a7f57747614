//! Curvature pipeline against closed forms, through the public API only.

use std::collections::BTreeMap;

use sublab::geometry::{pt, ChartDomain, ChartedManifold, Matrix};
use sublab::scenarios::build_scenario;

fn scenario(name: &str) -> sublab::scenarios::Scenario {
    build_scenario(name, &BTreeMap::new()).unwrap()
}

fn with_param(name: &str, key: &str, value: f64) -> sublab::scenarios::Scenario {
    let mut params = BTreeMap::new();
    params.insert(key.to_string(), value);
    build_scenario(name, &params).unwrap()
}

#[test]
fn flat_metric_has_no_curvature() {
    let sc = scenario("flat_torus_pair");
    for x in sc.sample_grid(25) {
        let report = sc.total.curvature_at(&x).unwrap();
        assert!(report.ricci_operator_norm < 1e-5, "Ricci {}", report.ricci_operator_norm);
        assert!(report.sectional_range.0.abs() < 1e-5);
        assert!(report.sectional_range.1.abs() < 1e-5);
    }
}

#[test]
fn sphere_sectional_curvature_is_inverse_square_radius() {
    for radius in [1.0, 2.0] {
        let sc = with_param("sphere", "radius", radius);
        let expected = 1.0 / (radius * radius);
        for x in sc.sample_grid(16) {
            let (lo, hi) = sc.total.curvature_at(&x).unwrap().sectional_range;
            assert!((lo - expected).abs() < 1e-3 * expected, "R={radius}: {lo}");
            assert!((hi - expected).abs() < 1e-3 * expected, "R={radius}: {hi}");
        }
    }
}

#[test]
fn fibration_pair_has_curvatures_one_and_four() {
    let sc = scenario("hopf");
    for x in sc.sample_grid(27) {
        let (lo, hi) = sc.total.curvature_at(&x).unwrap().sectional_range;
        assert!((lo - 1.0).abs() < 1e-3 && (hi - 1.0).abs() < 1e-3, "total [{lo}, {hi}]");
        let p = sc.f1.eval(&x).unwrap();
        let (blo, bhi) = sc.base.curvature_at(&p).unwrap().sectional_range;
        assert!((blo - 4.0).abs() < 5e-3 && (bhi - 4.0).abs() < 5e-3, "base [{blo}, {bhi}]");
    }
}

#[test]
fn rescaling_divides_sectional_curvature_by_lambda_squared() {
    let sc = scenario("sphere");
    let lambda = 3.0;
    let scaled = sc.total.rescaled(lambda);
    let x = pt(&[1.2, 0.7]);
    let before = sc.total.curvature_at(&x).unwrap().sectional_range.1;
    let after = scaled.curvature_at(&x).unwrap().sectional_range.1;
    assert!((after - before / (lambda * lambda)).abs() < 1e-6, "{after} vs {before}/9");
}

#[test]
fn degenerate_metric_is_refused() {
    let collapsing = ChartedManifold::new(ChartDomain::boxed(&[(-1.0, 1.0), (-1.0, 1.0)]), |x| {
        let mut g = Matrix::identity(2, 2);
        g[(1, 1)] = (x[0].abs() - 0.5).max(0.0); // collapses on |x0| <= 1/2
        g
    });
    assert!(collapsing.metric_at(&pt(&[0.0, 0.0])).is_err());
    assert!(collapsing.curvature_at(&pt(&[0.0, 0.0])).is_err());
}
