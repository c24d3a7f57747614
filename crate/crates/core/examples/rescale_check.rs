//! Scale-free quantities survive a uniform metric rescale.
//!
//! Scaling both metrics of a submersion pair by λ² multiplies lengths by λ,
//! divides the bending and bracket norms by λ, and leaves the distortion
//! and the vertical dihedral angle alone. The products |II|·d and |A|·d
//! with the pair's base distance are therefore scale-free, and the largest
//! relative drift across all four quantities must vanish. λ = 1/ε uses the
//! pair's own worst distortion as the scale, the natural normalization
//! when comparing pairs of different tightness.

use std::collections::BTreeMap;

use sublab::bounds::rescaling_invariance_experiment;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    for name in ["flat_torus_pair", "warped_product"] {
        let sc = build_scenario(name, &BTreeMap::new())?;
        let samples = sc.sample_grid(16);

        // Worst distortion of the pair fixes the geometry-derived scale.
        let mut eps = 0.0f64;
        for x in &samples {
            eps = eps.max(sc.f2.distortion_at(x)?.delta);
        }

        // λ = 1/ε only makes sense for pairs with actual distortion.
        let lambdas: Vec<f64> =
            if eps > 1e-6 { vec![10.0, 1.0 / eps] } else { vec![10.0] };
        println!("{name} (worst distortion {eps:.4}):");
        for lambda in lambdas {
            let report = rescaling_invariance_experiment(
                &sc.f1,
                &sc.f2,
                sc.trust_radius,
                lambda,
                &samples,
                1e-6,
            )?;
            println!(
                "  lambda {lambda:>8.4}: drift {:.3e}, pass {}  (delta {:.6}, dihedral {:.6}, II·d {:.6}, A·d {:.6})",
                report.lhs,
                report.pass,
                report.parameters["delta_max"],
                report.parameters["dihedral_max"],
                report.parameters["ii_dh"],
                report.parameters["a_dh"],
            );
        }
    }
    Ok(())
}
