//! The fiber-transport bundle map between a projection and its twist.
//!
//! On the flat 2-torus, `f₁(θ) = θ₂` sits next to the twisted projection
//! `f₂(θ) = θ₂ + a·sin θ₂`. The bundle map Φ carries a point over `f₂`'s
//! fiber to the matching point over `f₁`'s fiber by transporting along the
//! horizontal lift of the base geodesic, so that `f₂ ∘ Φ = f₁`. Here Φ has
//! the closed form `(θ₁, σ(θ₂))` with `σ + a·sin σ = θ₂`, which lets every
//! diagnostic be checked against an exact answer, including the worst
//! framed pullback defect `(1-a)⁻² - 1`.

use std::collections::BTreeMap;

use sublab::bundle::BundleMap;
use sublab::geometry::pt;
use sublab::scenarios::{build_scenario, sharpness_check};

fn main() -> sublab::Result<()> {
    let sc = build_scenario("flat_torus_pair", &BTreeMap::new())?;
    let a = sc.params["a"];
    let bundle = BundleMap::new(sc.f1.clone(), sc.f2.clone(), sc.trust_radius)?;
    let (phi_oracle, _) = sc.oracles.phi.as_ref().expect("scenario ships a closed form");

    // Worst gap between the transported point and the closed form.
    let grid = sc.sample_grid(256);
    let mut worst = 0.0f64;
    for x in &grid {
        let measured = bundle.at(x)?;
        let exact = phi_oracle(x);
        let gap = sc.total.metric_at(&exact)?.norm(&sc.total.displacement(&measured, &exact));
        worst = worst.max(gap);
    }
    println!("phi vs closed form over {} points: worst gap {worst:.3e}", grid.len());

    // The differential compresses the θ₂ direction by 1/(1 + a cos σ).
    let x = pt(&[1.0, 2.2]);
    let sigma = phi_oracle(&x)[1];
    let jac = bundle.differential_at(&x, sc.total.fd_step())?;
    println!("dPhi at θ₂ = 2.2:");
    println!("  measured [[{:+.8}, {:+.8}], [{:+.8}, {:+.8}]]", jac[(0, 0)], jac[(0, 1)], jac[(1, 0)], jac[(1, 1)]);
    println!("  expected [[{:+.8}, {:+.8}], [{:+.8}, {:+.8}]]", 1.0, 0.0, 0.0, 1.0 / (1.0 + a * sigma.cos()));

    // Commutation and vertical leakage, worst over a coarse grid.
    let mut commutation = 0.0f64;
    let mut leakage = 0.0f64;
    for x in grid.iter().step_by(4) {
        let d = bundle.diagnostics(x, sc.total.fd_step())?;
        commutation = commutation.max(d.commutation_residual);
        leakage = leakage.max(d.vertical_leakage);
    }
    println!("worst commutation residual {commutation:.3e}, worst vertical leakage {leakage:.3e}");

    // Base distance between the two projections equals the twist amplitude.
    let md = sc.f1.map_distance(&sc.f2, &grid, sc.trust_radius)?;
    println!("map distance {:.8} (twist amplitude {a})", md.value);

    // Worst framed pullback defect of Φ against its closed form.
    let sharp = sharpness_check(&sc, &[24, 24])?;
    let expected = (1.0 - a).powi(-2) - 1.0;
    println!("pullback defect {:.8} vs closed form {expected:.8}", sharp.gap);
    println!("  witness ({:.4}, {:.4})", sharp.witness[0], sharp.witness[1]);
    Ok(())
}
