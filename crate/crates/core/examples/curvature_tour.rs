//! Curvature survey across the example geometries.
//!
//! Samples each registered chart and prints the observed sectional-curvature
//! range and the largest Ricci operator norm. The values land on the closed
//! forms: flat tori at zero, the round sphere at `1/R²`, the unit 3-sphere
//! at one with its half-radius base at four.

use std::collections::BTreeMap;

use sublab::geometry::{ChartedManifold, Point};
use sublab::scenarios::build_scenario;

fn survey(label: &str, manifold: &ChartedManifold, points: &[Point]) -> sublab::Result<()> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut ricci = 0.0f64;
    for x in points {
        let report = manifold.curvature_at(x)?;
        lo = lo.min(report.sectional_range.0);
        hi = hi.max(report.sectional_range.1);
        ricci = ricci.max(report.ricci_operator_norm);
    }
    println!("{label:<28} {:>3}   [{lo:>10.6}, {hi:>10.6}]   {ricci:>10.6}", manifold.dim());
    Ok(())
}

fn main() -> sublab::Result<()> {
    println!("{:<28} {:>3}   {:^24}   {:>10}", "manifold", "dim", "sectional range", "|Ric| op");

    let flat = build_scenario("flat_torus_pair", &BTreeMap::new())?;
    survey("flat 2-torus", &flat.total, &flat.sample_grid(16))?;

    let sphere = build_scenario("sphere", &BTreeMap::new())?;
    survey("round sphere, R = 1", &sphere.total, &sphere.sample_grid(16))?;

    let mut params = BTreeMap::new();
    params.insert("radius".to_string(), 2.0);
    let big = build_scenario("sphere", &params)?;
    survey("round sphere, R = 2", &big.total, &big.sample_grid(16))?;

    let hopf = build_scenario("hopf", &BTreeMap::new())?;
    survey("unit 3-sphere", &hopf.total, &hopf.sample_grid(27))?;
    let base_points: Vec<Point> =
        hopf.sample_grid(27).iter().map(|x| hopf.f1.eval(x)).collect::<sublab::Result<_>>()?;
    survey("half-radius 2-sphere", &hopf.base, &base_points)?;

    let rippled = build_scenario("perturbed_torus", &BTreeMap::new())?;
    survey("rippled 2-torus", &rippled.total, &rippled.sample_grid(25))?;

    Ok(())
}
