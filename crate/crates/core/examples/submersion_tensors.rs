//! The pointwise submersion tensors on three contrasting geometries.
//!
//! For a map between charted manifolds the library measures, at any point:
//! the metric distortion δ (log of the extreme framed singular values), the
//! fiber bending norm |II| (how far fibers are from geodesic), and the
//! bracket norm |A| (how far horizontal planes are from integrable).
//!
//! * warped circle bundle — |II| equals the log-derivative |w′/w| of the
//!   radius profile, bending without bracket;
//! * unit 3-sphere over the half-radius sphere — bracket without bending,
//!   |A| = 2, and zero distortion;
//! * twisted torus projection — distortion without either tensor.

use std::collections::BTreeMap;

use sublab::geometry::pt;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    let warped = build_scenario("warped_product", &BTreeMap::new())?;
    let b = warped.params["b"];
    println!("warped circle bundle, radius profile w(r) = 1 + {b} r²:");
    println!("  {:>5}  {:>12}  {:>12}  {:>10}  {:>10}", "r", "|II| meas", "|w'/w|", "delta", "|A|");
    for &r in &[-0.6, -0.2, 0.0, 0.3, 0.7] {
        let x = pt(&[r, 1.0]);
        let ii = warped.f1.second_fundamental_form_at(&x)?.norm;
        let closed = (2.0 * b * r / (1.0 + b * r * r)).abs();
        let delta = warped.f1.distortion_at(&x)?.delta;
        let a = warped.f1.integrability_tensor_at(&x)?.norm;
        println!("  {r:>5.2}  {ii:>12.8}  {closed:>12.8}  {delta:>10.2e}  {a:>10.2e}");
    }

    let hopf = build_scenario("hopf", &BTreeMap::new())?;
    println!("\nunit 3-sphere over the half-radius 2-sphere:");
    println!("  {:>28}  {:>10}  {:>10}  {:>10}", "point", "delta", "|II|", "|A|");
    for x in hopf.sample_grid(8).iter().take(4) {
        let delta = hopf.f1.distortion_at(x)?.delta;
        let ii = hopf.f1.second_fundamental_form_at(x)?.norm;
        let a = hopf.f1.integrability_tensor_at(x)?.norm;
        println!(
            "  ({:>7.3}, {:>7.3}, {:>7.3})  {delta:>10.2e}  {ii:>10.2e}  {a:>10.6}",
            x[0], x[1], x[2]
        );
    }

    let twisted = build_scenario("flat_torus_pair", &BTreeMap::new())?;
    let a = twisted.params["a"];
    println!("\ntwisted torus projection θ₂ + {a}·sin θ₂:");
    println!("  {:>5}  {:>12}  {:>12}  {:>10}  {:>10}", "θ₂", "delta meas", "ln(1+a cos)", "|II|", "|A|");
    for &t in &[0.0, 1.0, 2.0, 3.0] {
        let x = pt(&[0.5, t]);
        let delta = twisted.f2.distortion_at(&x)?.delta;
        let closed = (1.0 + a * t.cos()).ln().abs();
        let ii = twisted.f2.second_fundamental_form_at(&x)?.norm;
        let br = twisted.f2.integrability_tensor_at(&x)?.norm;
        println!("  {t:>5.2}  {delta:>12.8}  {closed:>12.8}  {ii:>10.2e}  {br:>10.2e}");
    }
    Ok(())
}
