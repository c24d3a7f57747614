//! Bundle map between the 3-sphere fibration and a rotated copy.
//!
//! Both projections fiber the unit 3-sphere over the half-radius 2-sphere;
//! the second is composed with a small base rotation. The fiber-transport
//! map between them is close to an isometry, so its framed singular values
//! must stay inside `[e^{-angle}, e^{angle}]`, the commutation residual at
//! rounding level, and the leakage (how much of the differential escapes
//! the horizontal split) small.

use std::collections::BTreeMap;

use sublab::bundle::BundleMap;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    let sc = build_scenario("hopf", &BTreeMap::new())?;
    let angle = sc.params["rot_angle"];
    let bundle = BundleMap::new(sc.f1.clone(), sc.f2.clone(), sc.trust_radius)?;

    let points = sc.sample_grid(27);
    let mut commutation = 0.0f64;
    let mut leakage = 0.0f64;
    let (mut sv_lo, mut sv_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in &points {
        let d = bundle.diagnostics(x, sc.total.fd_step())?;
        commutation = commutation.max(d.commutation_residual);
        leakage = leakage.max(d.vertical_leakage);
        for sv in &d.singular_values {
            sv_lo = sv_lo.min(*sv);
            sv_hi = sv_hi.max(*sv);
        }
    }
    println!("rotation angle {angle}, {} sample points", points.len());
    println!("framed singular values of dPhi in [{sv_lo:.8}, {sv_hi:.8}]");
    println!("  isometry window [{:.8}, {:.8}]", (-angle).exp(), angle.exp());
    println!("worst commutation residual {commutation:.3e}");
    println!("worst vertical leakage     {leakage:.3e}");

    // The base rotation moves points of the half-radius sphere by at most
    // half the angle; the measured map distance sits under that.
    let md = sc.f1.map_distance(&sc.f2, &points, sc.trust_radius)?;
    println!("map distance {:.8} (rotation arc bound {:.8})", md.value, angle * 0.5);
    Ok(())
}
