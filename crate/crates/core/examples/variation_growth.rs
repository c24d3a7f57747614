//! How much a fiber variation grows while it rides a horizontal lift.
//!
//! A vertical seed at `x0` is flowed a short parameter distance inside the
//! fiber, the base geodesic is lifted from every flowed start, and the size
//! of the endpoint variation is compared to the seed. The measured growth
//! ratio must sit inside `exp(±e^ε |II| r)` with every constant measured on
//! the geometry. Two contrasting scenarios:
//!
//! * `warped_product` — fibers fatten with the base coordinate, so the
//!   ratio tracks the warp profile `w(r0 + r) / w(r0)` exactly;
//! * `hopf` — totally geodesic fibers (`|II| = 0`), so the envelope pins
//!   the ratio to 1.

use std::collections::BTreeMap;

use sublab::bounds::variation_bound_experiment;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    for name in ["warped_product", "hopf"] {
        let sc = build_scenario(name, &BTreeMap::new())?;
        let bench = sc.variation_bench.as_ref().expect("scenario ships a variation bench");
        println!("{name}: seed at {:?}", bench.x0.as_slice());
        println!("  {:>6}  {:>12}  {:>12}  {:>12}  {:>6}", "r", "lower", "ratio", "upper", "pass");
        for &r in &bench.r_values {
            let out = variation_bound_experiment(
                &sc.f1,
                &bench.x0,
                &bench.vertical_seed,
                &bench.base_dir,
                r,
                1e-3,
            )?;
            println!(
                "  {:>6.2}  {:>12.8}  {:>12.8}  {:>12.8}  {:>6}",
                r,
                out.lower.lhs,
                out.ratio,
                out.upper.rhs,
                out.upper.pass && out.lower.pass,
            );
        }
        println!();
    }
    Ok(())
}
